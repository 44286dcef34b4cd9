"""
rejectq: exact simulation of CNOT-free optical bit-flip error rejection.
"""

__version__ = "0.1.0"

from rejectq.core.channels.models import (
    BitFlip,
    CoherentRotation,
    ErrorModel,
    ErrorSequence,
    NoError,
    PhaseFlip,
)
from rejectq.core.config.settings import (
    ConfigManager,
    ExperimentConfig,
    Protocol,
    RunMode,
)
from rejectq.core.errors import (
    ChannelError,
    ConfigError,
    OutputError,
    PhotonNumberError,
    RejectqError,
    StateError,
    ZeroProbabilityError,
)
from rejectq.core.harness.runner import run_experiment, sweep
from rejectq.core.harness.stats import ExperimentStats
from rejectq.core.harness.verification import verify
from rejectq.core.optics.fock import FockState, coincidence_project, pbs_transform
from rejectq.core.protocols.optical import (
    dual_distribution,
    end_to_end_teleport,
    optical_reject_transmit,
)
from rejectq.core.protocols.outcome import ForcedOutcomes, ProtocolOutcome
from rejectq.core.protocols.repetition import (
    encode_repetition,
    parity_reject,
    repetition_correct,
    syndrome_correct,
)
from rejectq.core.protocols.teleportation import teleport
from rejectq.core.statevec.state import PureState, QubitLabel

__all__ = [
    "BitFlip",
    "ChannelError",
    "CoherentRotation",
    "ConfigError",
    "ConfigManager",
    "ErrorModel",
    "ErrorSequence",
    "ExperimentConfig",
    "ExperimentStats",
    "FockState",
    "ForcedOutcomes",
    "NoError",
    "OutputError",
    "PhaseFlip",
    "PhotonNumberError",
    "Protocol",
    "ProtocolOutcome",
    "PureState",
    "QubitLabel",
    "RejectqError",
    "RunMode",
    "StateError",
    "ZeroProbabilityError",
    "coincidence_project",
    "dual_distribution",
    "encode_repetition",
    "end_to_end_teleport",
    "optical_reject_transmit",
    "parity_reject",
    "pbs_transform",
    "repetition_correct",
    "run_experiment",
    "sweep",
    "syndrome_correct",
    "teleport",
    "verify",
]
