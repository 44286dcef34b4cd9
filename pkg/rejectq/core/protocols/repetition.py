"""
CNOT-based reference codes: the three-qubit bit-flip repetition code and the
single-ancilla rejection code.
"""

from __future__ import annotations

import logging
from typing import NamedTuple, Optional, Tuple

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
from rejectq.core.statevec import gates
from rejectq.core.statevec.measurement import COMPUTATIONAL, fidelity, measure, outcome_probabilities
from rejectq.core.statevec.state import (
    PureState,
    QubitLabel,
    apply_cnot,
    apply_single,
    qubit,
    tensor,
)

logger = logging.getLogger("rejectq.protocols")

DATA = QubitLabel.PARTICLE1
ANCILLAS = (QubitLabel.ANCILLA_1, QubitLabel.ANCILLA_2)

# Which qubit the syndrome blames. Only a flip of the data qubit needs fixing
# before decoding; ancilla flips are absorbed by the measurement.
SYNDROME_TABLE = {
    (0, 0): None,
    (1, 1): QubitLabel.PARTICLE1,
    (1, 0): QubitLabel.ANCILLA_1,
    (0, 1): QubitLabel.ANCILLA_2,
}


class SyndromeResult(NamedTuple):
    corrected: PureState
    syndrome: Tuple[int, int]
    probability: float


def _zero(label: QubitLabel) -> PureState:
    return PureState.basis([label], [0])


def encode_repetition(alpha: complex, beta: complex) -> PureState:
    """Encode alpha|0> + beta|1> into alpha|000> + beta|111> with two CNOTs.

    Raises:
        StateError: if |alpha|² + |beta|² differs from 1 by more than 1e-10
    """
    state = qubit(alpha, beta, DATA)
    for ancilla in ANCILLAS:
        state = apply_cnot(tensor(state, _zero(ancilla)), DATA, ancilla)
    return state


def _readout(
    state: PureState,
    label: QubitLabel,
    rng: Optional[np.random.Generator],
    forced: Optional[int],
):
    if forced is None and rng is None:
        # No randomness supplied: take the most likely outcome.
        forced = int(np.argmax(outcome_probabilities(state, label)))
    return measure(state, label, COMPUTATIONAL, rng=rng if forced is None else None, forced=forced)


def syndrome_correct(
    state: PureState,
    rng: Optional[np.random.Generator] = None,
    forced: Optional[Tuple[int, int]] = None,
) -> SyndromeResult:
    """Decode a possibly corrupted repetition codeword.

    Two CNOTs from particle 1 onto the ancillas, then both ancillas are read
    out in the computational basis. Syndrome (1, 1) blames particle 1 and
    triggers an X on it; (1, 0) and (0, 1) blame an ancilla.

    Returns:
        Decoded particle-1 state, syndrome bits and their Born probability
    """
    for ancilla in ANCILLAS:
        state = apply_cnot(state, DATA, ancilla)

    bits = []
    probability = 1.0
    for i, ancilla in enumerate(ANCILLAS):
        result = _readout(state, ancilla, rng, None if forced is None else forced[i])
        bits.append(result.outcome)
        probability *= result.probability
        state = result.post_state

    syndrome = (bits[0], bits[1])
    blamed = SYNDROME_TABLE[syndrome]
    if blamed is DATA:
        state = apply_single(state, DATA, gates.X)
    logger.debug("Syndrome %s blames %s", syndrome, blamed)
    return SyndromeResult(state, syndrome, probability)


def repetition_correct(
    alpha: complex,
    beta: complex,
    model1: ErrorModel = NO_ERROR,
    model_ancilla1: ErrorModel = NO_ERROR,
    model_ancilla2: ErrorModel = NO_ERROR,
    rng: Optional[np.random.Generator] = None,
    forced: Optional[ForcedOutcomes] = None,
) -> ProtocolOutcome:
    """Encode, transmit all three qubits and correct. Always accepted."""
    target = qubit(alpha, beta, DATA)
    state = encode_repetition(alpha, beta)
    state, record = apply_channels(
        state,
        [(DATA, model1), (ANCILLAS[0], model_ancilla1), (ANCILLAS[1], model_ancilla2)],
        rng,
    )
    result = syndrome_correct(state, rng, forced.syndrome if forced else None)
    return ProtocolOutcome(
        verdict=Verdict.ACCEPTED,
        message=ClassicalMessage(syndrome_bits=result.syndrome),
        final_state=result.corrected,
        target_state=target,
        fidelity=fidelity(result.corrected, target),
        error_record=record,
        probability=result.probability,
        accept_probability=1.0,
    )


def parity_reject(
    alpha: complex,
    beta: complex,
    model3: ErrorModel = NO_ERROR,
    model4: ErrorModel = NO_ERROR,
    rng: Optional[np.random.Generator] = None,
    forced: Optional[ForcedOutcomes] = None,
) -> ProtocolOutcome:
    """Single-ancilla rejection code.

    Encodes alpha|00> + beta|11> on (particle1, ancilla_1), sends both through
    their channels and measures the CNOT parity on the ancilla. Outcome 0
    accepts the decoded qubit; outcome 1 means a single error occurred and the
    transmission is invalidated. A double flip passes unnoticed.
    """
    target = qubit(alpha, beta, DATA)
    ancilla = ANCILLAS[0]
    state = apply_cnot(tensor(target, _zero(ancilla)), DATA, ancilla)
    state, record = apply_channels(state, [(DATA, model3), (ancilla, model4)], rng)
    state = apply_cnot(state, DATA, ancilla)

    forced_bit = forced.ancilla if forced else None
    if forced_bit is None and rng is None:
        raise StateError("parity_reject needs an rng or a forced ancilla outcome")
    result = measure(state, ancilla, COMPUTATIONAL, rng=rng, forced=forced_bit)
    message = ClassicalMessage(ancilla_outcome=result.outcome)
    accept_probability = float(outcome_probabilities(state, ancilla)[0])

    if result.outcome == 1:
        return ProtocolOutcome(
            verdict=Verdict.REJECTED,
            message=message,
            target_state=target,
            error_record=record,
            probability=result.probability,
            accept_probability=accept_probability,
        )
    return ProtocolOutcome(
        verdict=Verdict.ACCEPTED,
        message=message,
        final_state=result.post_state,
        target_state=target,
        fidelity=fidelity(result.post_state, target),
        error_record=record,
        probability=result.probability,
        accept_probability=accept_probability,
    )
