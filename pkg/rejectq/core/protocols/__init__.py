"""Executable reference codes, teleportation and the optical rejection scheme."""

from rejectq.core.protocols.optical import (
    ParityProjection,
    dual_distribution,
    end_to_end_teleport,
    optical_reject_transmit,
    parity_projection,
    prepare_ghz3,
    prepare_ghz4,
    sift_key_bits,
)
from rejectq.core.protocols.outcome import (
    ClassicalMessage,
    ForcedOutcomes,
    ProtocolOutcome,
    Verdict,
)
from rejectq.core.protocols.repetition import (
    SYNDROME_TABLE,
    SyndromeResult,
    encode_repetition,
    parity_reject,
    repetition_correct,
    syndrome_correct,
)
from rejectq.core.protocols.teleportation import BELL_CORRECTIONS, teleport

__all__ = [
    "BELL_CORRECTIONS",
    "SYNDROME_TABLE",
    "ClassicalMessage",
    "ForcedOutcomes",
    "ParityProjection",
    "ProtocolOutcome",
    "SyndromeResult",
    "Verdict",
    "dual_distribution",
    "encode_repetition",
    "end_to_end_teleport",
    "optical_reject_transmit",
    "parity_projection",
    "parity_reject",
    "prepare_ghz3",
    "prepare_ghz4",
    "repetition_correct",
    "sift_key_bits",
    "syndrome_correct",
    "teleport",
]
