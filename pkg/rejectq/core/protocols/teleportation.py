"""
Teleportation of particle 1 through a shared Φ+ pair (particles 2 and 3).
"""

from __future__ import annotations

from typing import Mapping, Optional

import numpy as np

from rejectq.core.errors import StateError
from rejectq.core.protocols.outcome import (
    ClassicalMessage,
    ForcedOutcomes,
    ProtocolOutcome,
    Verdict,
)
from rejectq.core.statevec import gates
from rejectq.core.statevec.measurement import bell_measure, fidelity
from rejectq.core.statevec.state import (
    LabelLike,
    PureState,
    QubitLabel,
    apply_single,
    bell_state,
    relabel,
    tensor,
)

# Outcome k of the Bell measurement (0:Φ+, 1:Φ−, 2:Ψ+, 3:Ψ−) leaves the far
# qubit in C_k^{-1}|psi> up to a global phase.
BELL_CORRECTIONS: Mapping[int, np.ndarray] = {
    0: gates.I,
    1: gates.Z,
    2: gates.X,
    3: gates.XZ,
}

_SHARED_PAIR = bell_state(0, [QubitLabel.PARTICLE2, QubitLabel.PARTICLE3])


def correction_for(
    bell_outcome: int,
    corrections: Optional[Mapping[int, np.ndarray]] = None,
) -> np.ndarray:
    table = BELL_CORRECTIONS if corrections is None else corrections
    return np.asarray(table[bell_outcome], dtype=np.complex128)


def as_input(state: PureState, label: LabelLike = QubitLabel.PARTICLE1) -> PureState:
    """Relabel a single-qubit input state as the given particle."""
    if state.num_qubits != 1:
        raise StateError(f"Input must be a single qubit, got {state.num_qubits} qubits")
    return relabel(state, {state.labels[0]: label})


def teleport(
    input_state: PureState,
    rng: Optional[np.random.Generator] = None,
    forced: Optional[ForcedOutcomes] = None,
    corrections: Optional[Mapping[int, np.ndarray]] = None,
) -> ProtocolOutcome:
    """Teleport the state of particle 1 onto particle 3.

    Args:
        input_state: Normalized single-qubit state to transmit
        rng: Randomness for the Bell measurement
        forced: Forced Bell outcome (``forced.bell``)
        corrections: Override of the outcome -> unitary table

    Returns:
        Accepted outcome carrying the corrected particle-3 state
    """
    source = as_input(input_state, QubitLabel.PARTICLE1)
    target = as_input(input_state, QubitLabel.PARTICLE3)
    state = tensor(source, _SHARED_PAIR)

    forced_bell = forced.bell if forced else None
    result = bell_measure(
        state, QubitLabel.PARTICLE1, QubitLabel.PARTICLE2, rng=rng, forced=forced_bell
    )
    final = apply_single(
        result.post_state, QubitLabel.PARTICLE3, correction_for(result.outcome, corrections)
    )
    return ProtocolOutcome(
        verdict=Verdict.ACCEPTED,
        message=ClassicalMessage(bell_outcome=result.outcome),
        final_state=final,
        target_state=target,
        fidelity=fidelity(final, target),
        probability=result.probability,
        accept_probability=1.0,
    )
