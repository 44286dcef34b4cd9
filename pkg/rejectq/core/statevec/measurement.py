"""
Projective measurements (single-qubit bases and the Bell basis) and fidelity.

Every measurement runs in one of two modes: sampling, where the outcome is
drawn with its Born probability from a numpy Generator, or forced, where the
caller names the outcome and receives its Born weight.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Optional, Sequence

import numpy as np

from rejectq.core.errors import StateError, ZeroProbabilityError
from rejectq.core.statevec.state import (
    IDENTITY_ATOL,
    LabelLike,
    PureState,
    permute,
)

FORCE_THRESHOLD = 1e-12

_S = 1 / math.sqrt(2)

BELL_NAMES = ("Phi+", "Phi-", "Psi+", "Psi-")
BELL_BASIS = np.array(
    [
        [_S, 0, 0, _S],
        [_S, 0, 0, -_S],
        [0, _S, _S, 0],
        [0, _S, -_S, 0],
    ],
    dtype=np.complex128,
)
BELL_BASIS.flags.writeable = False


class SingleQubitBasis:
    """Orthonormal measurement basis for one qubit."""

    __slots__ = ("name", "_matrix")

    def __init__(
        self,
        zero: Sequence[complex],
        one: Sequence[complex],
        name: str = "custom",
        atol: float = IDENTITY_ATOL,
    ) -> None:
        matrix = np.array([zero, one], dtype=np.complex128)
        if matrix.shape != (2, 2):
            raise StateError("Basis vectors must both have two components")
        gram = matrix.conj() @ matrix.T
        deviation = float(np.max(np.abs(gram - np.eye(2))))
        if deviation > atol:
            raise StateError(
                f"Basis '{name}' is not orthonormal: max |<v_i|v_j> - δ_ij| = {deviation:.3e}"
            )
        matrix.flags.writeable = False
        self.name = name
        self._matrix = matrix

    @property
    def vectors(self) -> np.ndarray:
        """Rows are the basis vectors for outcome 0 and outcome 1."""
        return self._matrix

    def __repr__(self) -> str:
        return f"SingleQubitBasis({self.name})"


COMPUTATIONAL = SingleQubitBasis([1, 0], [0, 1], name="computational")
# 45° linear basis: |0'> = (|0>+|1>)/√2, |1'> = (|0>-|1>)/√2
DIAGONAL = SingleQubitBasis([_S, _S], [_S, -_S], name="diagonal")


class MeasurementResult(NamedTuple):
    outcome: int
    probability: float
    post_state: PureState


def select_outcome(
    probabilities: np.ndarray,
    rng: Optional[np.random.Generator] = None,
    forced: Optional[int] = None,
) -> int:
    """Pick an outcome index, either forced or sampled with the Born weights."""
    if forced is not None:
        if forced not in range(len(probabilities)):
            raise StateError(
                f"Forced outcome {forced!r} outside 0..{len(probabilities) - 1}"
            )
        if probabilities[forced] <= FORCE_THRESHOLD:
            raise ZeroProbabilityError(forced, float(probabilities[forced]))
        return forced
    if rng is None:
        raise StateError("A measurement needs either an rng or a forced outcome")
    cumulative = np.cumsum(probabilities)
    draw = rng.random() * cumulative[-1]
    return min(int(np.searchsorted(cumulative, draw, side="right")), len(cumulative) - 1)


def _project(
    state: PureState,
    axes: Sequence[int],
    basis: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Components of the state along each basis row, over the measured axes."""
    k = len(axes)
    moved = np.moveaxis(state.tensor_view(), list(axes), list(range(k)))
    psi = moved.reshape(2**k, -1)
    components = basis.conj() @ psi
    probabilities = np.sum(np.abs(components) ** 2, axis=1)
    return components, probabilities / probabilities.sum()


def outcome_probabilities(
    state: PureState, target: LabelLike, basis: SingleQubitBasis = COMPUTATIONAL
) -> np.ndarray:
    """Born probabilities of both outcomes without collapsing the state."""
    _, probabilities = _project(state, [state.index(target)], basis.vectors)
    return probabilities


def measure(
    state: PureState,
    target: LabelLike,
    basis: SingleQubitBasis = COMPUTATIONAL,
    rng: Optional[np.random.Generator] = None,
    forced: Optional[int] = None,
) -> MeasurementResult:
    """Measure one qubit and drop it from the post-measurement state.

    Args:
        state: State to measure
        target: Label of the measured qubit
        basis: Measurement basis; outcome k projects onto its k-th vector
        rng: Randomness for sampling mode
        forced: Outcome to select in forced mode

    Returns:
        Outcome, its Born probability and the renormalized remaining state

    Raises:
        ZeroProbabilityError: when forcing an outcome of probability <= 1e-12
    """
    axis = state.index(target)
    components, probabilities = _project(state, [axis], basis.vectors)
    outcome = select_outcome(probabilities, rng, forced)
    probability = float(probabilities[outcome])
    remaining = [label for label in state.labels if label != state.labels[axis]]
    post = components[outcome] / np.linalg.norm(components[outcome])
    return MeasurementResult(outcome, probability, PureState._trusted(remaining, post))


def bell_measure(
    state: PureState,
    q1: LabelLike,
    q2: LabelLike,
    rng: Optional[np.random.Generator] = None,
    forced: Optional[int] = None,
) -> MeasurementResult:
    """Project two qubits onto Φ+, Φ−, Ψ+, Ψ− (outcomes 0..3) and remove them."""
    a1, a2 = state.index(q1), state.index(q2)
    if a1 == a2:
        raise StateError(f"Bell measurement needs two distinct qubits, got {q1} twice")
    components, probabilities = _project(state, [a1, a2], BELL_BASIS)
    outcome = select_outcome(probabilities, rng, forced)
    measured = {state.labels[a1], state.labels[a2]}
    remaining = [label for label in state.labels if label not in measured]
    post = components[outcome] / np.linalg.norm(components[outcome])
    return MeasurementResult(
        outcome, float(probabilities[outcome]), PureState._trusted(remaining, post)
    )


def bell_probabilities(state: PureState, q1: LabelLike, q2: LabelLike) -> np.ndarray:
    """Probabilities of the four Bell outcomes without collapsing the state."""
    _, probabilities = _project(state, [state.index(q1), state.index(q2)], BELL_BASIS)
    return probabilities


def fidelity(state: PureState, reference: PureState) -> float:
    """Overlap |<reference|state>|² between pure states on the same labels."""
    if set(state.labels) != set(reference.labels) or state.num_qubits != reference.num_qubits:
        raise StateError(
            f"Fidelity needs matching labels, got {[str(q) for q in state.labels]} "
            f"and {[str(q) for q in reference.labels]}"
        )
    aligned = permute(reference, state.labels)
    overlap = abs(np.vdot(aligned.amplitudes, state.amplitudes)) ** 2
    return float(min(1.0, overlap))
