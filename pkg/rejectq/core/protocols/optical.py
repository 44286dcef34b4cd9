"""
CNOT-free error rejection with a polarizing beam splitter.

A GHZ state is prepared directly, two of its photons cross the noisy channel,
and a PBS followed by coincidence detection checks their parity. The photon
in arm b is then measured in the 45° basis, which leaves particle 2 and the
photon in arm a in a known Bell state. On the main path the PBS is modeled as
a two-outcome projection on qubits (accept: span{|00>, |11>}); the Fock-space
model in ``rejectq.core.optics`` is its oracle.
"""

from __future__ import annotations

import logging
import math
from typing import Mapping, NamedTuple, Optional, Tuple

import numpy as np

from rejectq.core.channels.models import NO_ERROR, ErrorModel
from rejectq.core.channels.noise import apply_channels
from rejectq.core.errors import StateError
from rejectq.core.protocols.outcome import (
    ClassicalMessage,
    ForcedOutcomes,
    ProtocolOutcome,
    Verdict,
)
from rejectq.core.protocols.teleportation import as_input, correction_for
from rejectq.core.statevec import gates
from rejectq.core.statevec.measurement import (
    COMPUTATIONAL,
    DIAGONAL,
    SingleQubitBasis,
    bell_measure,
    fidelity,
    measure,
)
from rejectq.core.statevec.state import (
    LabelLike,
    PureState,
    QubitLabel,
    apply_single,
    bell_state,
    ghz_state,
    permute,
    relabel,
    tensor,
)

logger = logging.getLogger("rejectq.protocols")

ACCEPT_THRESHOLD = 1e-12

P1 = QubitLabel.PARTICLE1
P2 = QubitLabel.PARTICLE2
P3 = QubitLabel.PARTICLE3
P4 = QubitLabel.PARTICLE4
ARM_A = QubitLabel.ARM_A
ARM_B = QubitLabel.ARM_B


class ParityProjection(NamedTuple):
    accept_probability: float
    conditional: Optional[PureState]


class _SideResult(NamedTuple):
    accepted: bool
    accept_probability: float
    weight: float
    b_outcome: Optional[int]
    remaining: Optional[PureState]


# PureState is immutable, so the resource and target states are shared.
_GHZ3 = ghz_state([P2, P3, P4])
_GHZ4 = ghz_state(
    [
        QubitLabel.PARTICLE3_LEFT,
        QubitLabel.PARTICLE4_LEFT,
        QubitLabel.PARTICLE3_RIGHT,
        QubitLabel.PARTICLE4_RIGHT,
    ]
)
_PAIR_TARGET = bell_state(0, [P2, ARM_A])
_DUAL_TARGET = bell_state(0, [QubitLabel.ARM_A_LEFT, QubitLabel.ARM_A_RIGHT])


def prepare_ghz3() -> PureState:
    """(|0>_2|00>_34 + |1>_2|11>_34)/√2, prepared without any CNOT."""
    return _GHZ3


def prepare_ghz4() -> PureState:
    """(|0000> + |1111>)/√2 over the left and right photon pairs."""
    return _GHZ4


def parity_projection(
    state: PureState,
    first: LabelLike,
    second: LabelLike,
    arm_a: LabelLike = ARM_A,
    arm_b: LabelLike = ARM_B,
) -> ParityProjection:
    """Qubit-level PBS parity check.

    Projects ``first`` and ``second`` onto equal polarizations. The photon
    entering the PBS as ``first`` is renamed ``arm_a`` and ``second`` becomes
    ``arm_b``: for equal polarizations both arms carry the same value, so
    this matches the physical routing.

    Returns:
        Coincidence probability and the renormalized conditional state, or
        ``None`` in place of the state when the probability is below 1e-12
    """
    i, j = state.index(first), state.index(second)
    if i == j:
        raise StateError("Parity check needs two distinct photons")
    psi = state.tensor_view().copy()
    n = state.num_qubits
    for bit_i, bit_j in ((0, 1), (1, 0)):
        selector: list = [slice(None)] * n
        selector[i], selector[j] = bit_i, bit_j
        psi[tuple(selector)] = 0
    accept_probability = float(np.sum(np.abs(psi) ** 2))
    if accept_probability < ACCEPT_THRESHOLD:
        return ParityProjection(accept_probability, None)
    projected = PureState._trusted(state.labels, psi / math.sqrt(accept_probability))
    return ParityProjection(
        accept_probability, relabel(projected, {first: arm_a, second: arm_b})
    )


def _check_side(
    state: PureState,
    first: LabelLike,
    second: LabelLike,
    arm_a: LabelLike,
    arm_b: LabelLike,
    rng: Optional[np.random.Generator],
    forced: Optional[ForcedOutcomes],
    forced_b: Optional[int],
    phase_fix: bool,
) -> _SideResult:
    """PBS coincidence followed by the diagonal-basis measurement of arm b.

    With ``forced`` set the coincidence is post-selected whenever it is
    possible; otherwise it is sampled from ``rng``.
    """
    projection = parity_projection(state, first, second, arm_a, arm_b)
    p_accept = projection.accept_probability
    if forced is None and rng is None:
        raise StateError("The parity check needs an rng or forced outcomes")
    if forced is not None:
        accepted = projection.conditional is not None
    else:
        accepted = projection.conditional is not None and rng.random() < p_accept

    if not accepted:
        return _SideResult(False, p_accept, 1.0 - p_accept, None, None)

    result = measure(
        projection.conditional,
        arm_b,
        DIAGONAL,
        rng=rng if forced_b is None else None,
        forced=forced_b,
    )
    remaining = result.post_state
    if phase_fix and result.outcome == 1:
        remaining = apply_single(remaining, arm_a, gates.Z)
    return _SideResult(
        True, p_accept, p_accept * result.probability, result.outcome, remaining
    )


def optical_reject_transmit(
    model3: ErrorModel = NO_ERROR,
    model4: ErrorModel = NO_ERROR,
    rng: Optional[np.random.Generator] = None,
    forced: Optional[ForcedOutcomes] = None,
    phase_fix: bool = True,
) -> ProtocolOutcome:
    """Distribute a Φ+ pair (particle2, arm_a) through a noisy channel.

    Args:
        model3: Channel acting on particle 3
        model4: Channel acting on particle 4
        rng: Per-trial substream for channels and measurements
        forced: Deterministic branch selection; the coincidence is then
            post-selected and its probability reported
        phase_fix: Apply Z on arm_a after outcome 1' so the pair is always Φ+

    Returns:
        Accepted outcome with the pair ordered (particle2, arm_a), or a
        rejection when no coincidence occurred
    """
    state = prepare_ghz3()
    state, record = apply_channels(state, [(P3, model3), (P4, model4)], rng)
    side = _check_side(
        state, P3, P4, ARM_A, ARM_B, rng, forced, forced.b if forced else None, phase_fix
    )
    target = _PAIR_TARGET

    if not side.accepted:
        logger.debug("No coincidence (flips on %s)", record.flipped_labels())
        return ProtocolOutcome(
            verdict=Verdict.REJECTED,
            target_state=target,
            error_record=record,
            probability=side.weight,
            accept_probability=side.accept_probability,
        )

    pair = permute(side.remaining, [P2, ARM_A])
    return ProtocolOutcome(
        verdict=Verdict.ACCEPTED,
        message=ClassicalMessage(b_outcome=side.b_outcome),
        final_state=pair,
        target_state=target,
        fidelity=fidelity(pair, target),
        error_record=record,
        probability=side.weight,
        accept_probability=side.accept_probability,
    )


def end_to_end_teleport(
    input_state: PureState,
    model3: ErrorModel = NO_ERROR,
    model4: ErrorModel = NO_ERROR,
    rng: Optional[np.random.Generator] = None,
    forced: Optional[ForcedOutcomes] = None,
    corrections: Optional[Mapping[int, np.ndarray]] = None,
) -> ProtocolOutcome:
    """Teleport particle 1 onto the photon in arm a through the purified link.

    The pair is left uncorrected by the arm-b result; instead the final
    unitary on arm a is C[bell_outcome] · Z^b_outcome, so both classical
    messages determine it.
    """
    link = optical_reject_transmit(model3, model4, rng, forced, phase_fix=False)
    target = as_input(input_state, ARM_A)
    if not link.accepted:
        return link.model_copy(update={"target_state": target})

    state = tensor(as_input(input_state, P1), link.final_state)
    result = bell_measure(state, P1, P2, rng=rng, forced=forced.bell if forced else None)
    b_outcome = link.message.b_outcome
    unitary = correction_for(result.outcome, corrections) @ (
        gates.Z if b_outcome == 1 else gates.I
    )
    final = apply_single(result.post_state, ARM_A, unitary)
    return ProtocolOutcome(
        verdict=Verdict.ACCEPTED,
        message=ClassicalMessage(bell_outcome=result.outcome, b_outcome=b_outcome),
        final_state=final,
        target_state=target,
        fidelity=fidelity(final, target),
        error_record=link.error_record,
        probability=link.probability * result.probability,
        accept_probability=link.accept_probability,
    )


def dual_distribution(
    model_left3: ErrorModel = NO_ERROR,
    model_left4: ErrorModel = NO_ERROR,
    model_right3: ErrorModel = NO_ERROR,
    model_right4: ErrorModel = NO_ERROR,
    rng: Optional[np.random.Generator] = None,
    forced: Optional[ForcedOutcomes] = None,
) -> ProtocolOutcome:
    """Distribute both halves of a pair, each side with its own parity check.

    Starts from a four-photon GHZ state; both photons of each side cross that
    side's channels. The pair (arm_aL, arm_aR) is accepted only if both
    coincidences occur, and per-side phase fixes make it Φ+.
    """
    state = prepare_ghz4()
    state, record = apply_channels(
        state,
        [
            (QubitLabel.PARTICLE3_LEFT, model_left3),
            (QubitLabel.PARTICLE4_LEFT, model_left4),
            (QubitLabel.PARTICLE3_RIGHT, model_right3),
            (QubitLabel.PARTICLE4_RIGHT, model_right4),
        ],
        rng,
    )
    target = _DUAL_TARGET

    left = _check_side(
        state,
        QubitLabel.PARTICLE3_LEFT,
        QubitLabel.PARTICLE4_LEFT,
        QubitLabel.ARM_A_LEFT,
        QubitLabel.ARM_B_LEFT,
        rng,
        forced,
        forced.b if forced else None,
        phase_fix=True,
    )
    if not left.accepted:
        return ProtocolOutcome(
            verdict=Verdict.REJECTED,
            target_state=target,
            error_record=record,
            probability=left.weight,
            accept_probability=left.accept_probability,
        )

    right = _check_side(
        left.remaining,
        QubitLabel.PARTICLE3_RIGHT,
        QubitLabel.PARTICLE4_RIGHT,
        QubitLabel.ARM_A_RIGHT,
        QubitLabel.ARM_B_RIGHT,
        rng,
        forced,
        forced.b_right if forced else None,
        phase_fix=True,
    )
    accept_probability = left.accept_probability * right.accept_probability
    if not right.accepted:
        return ProtocolOutcome(
            verdict=Verdict.REJECTED,
            message=ClassicalMessage(b_outcome=left.b_outcome),
            target_state=target,
            error_record=record,
            probability=left.weight * right.weight,
            accept_probability=accept_probability,
        )

    pair = permute(right.remaining, [QubitLabel.ARM_A_LEFT, QubitLabel.ARM_A_RIGHT])
    return ProtocolOutcome(
        verdict=Verdict.ACCEPTED,
        message=ClassicalMessage(b_outcome=left.b_outcome, b_outcome_right=right.b_outcome),
        final_state=pair,
        target_state=target,
        fidelity=fidelity(pair, target),
        error_record=record,
        probability=left.weight * right.weight,
        accept_probability=accept_probability,
    )


def sift_key_bits(
    pair: PureState,
    basis: SingleQubitBasis = COMPUTATIONAL,
    rng: Optional[np.random.Generator] = None,
    forced: Optional[int] = None,
) -> Tuple[int, int]:
    """Measure both halves of a distributed pair in the same basis.

    For Φ+ the two bits agree in both the computational and the diagonal
    basis, which is what key distribution on the accepted pair relies on.
    ``forced`` fixes the first party's bit. The second bit is sampled from
    ``rng`` when one is given; without an rng it is the most likely outcome
    given the first, which for Φ+ is the first bit itself.
    """
    if pair.num_qubits != 2:
        raise StateError("Key sifting needs a two-qubit pair")
    first, second = pair.labels
    a = measure(pair, first, basis, rng=rng if forced is None else None, forced=forced)
    if rng is None:
        probabilities = np.abs(basis.vectors.conj() @ a.post_state.amplitudes) ** 2
        b_bit = int(np.argmax(probabilities))
    else:
        b_bit = measure(a.post_state, second, basis, rng=rng).outcome
    return a.outcome, b_bit
