"""
Exception hierarchy shared by the simulator, the protocols and the harness.
"""


class RejectqError(Exception):
    """Base class for all rejectq errors."""


class StateError(RejectqError, ValueError):
    """An operation on a quantum state was given invalid arguments."""


class ZeroProbabilityError(StateError):
    """A forced measurement outcome has (numerically) zero Born weight."""

    def __init__(self, outcome: object, probability: float) -> None:
        self.outcome = outcome
        self.probability = probability
        super().__init__(
            f"Cannot force outcome {outcome}: Born probability is {probability:.3e}"
        )


class PhotonNumberError(StateError):
    """A Fock state does not carry the photon number an operation requires."""


class ChannelError(RejectqError, ValueError):
    """An error model is invalid or cannot be applied in the requested mode."""


class ConfigError(RejectqError, ValueError):
    """An experiment configuration is invalid."""


class OutputError(RejectqError, OSError):
    """A result file could not be written."""
