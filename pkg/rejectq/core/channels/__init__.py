"""Per-photon noise models and their trajectory-mode application."""

from rejectq.core.channels.models import (
    NO_ERROR,
    BitFlip,
    CoherentRotation,
    ErrorModel,
    ErrorSequence,
    NoError,
    PhaseFlip,
    describe,
    enumerate_branches,
    is_deterministic,
    parse_error_model,
)
from rejectq.core.channels.noise import (
    ChannelEvent,
    ErrorRecord,
    RandomSource,
    apply_channel,
    apply_channels,
)

__all__ = [
    "NO_ERROR",
    "BitFlip",
    "ChannelEvent",
    "CoherentRotation",
    "ErrorModel",
    "ErrorRecord",
    "ErrorSequence",
    "NoError",
    "PhaseFlip",
    "RandomSource",
    "apply_channel",
    "apply_channels",
    "describe",
    "enumerate_branches",
    "is_deterministic",
    "parse_error_model",
]
