from rejectq.core.config.settings import (
    CHANNEL_POSITIONS,
    ConfigManager,
    ErrorModelKind,
    ExperimentConfig,
    InputState,
    OutputFormat,
    Protocol,
    RunMode,
)

__all__ = [
    "CHANNEL_POSITIONS",
    "ConfigManager",
    "ErrorModelKind",
    "ExperimentConfig",
    "InputState",
    "OutputFormat",
    "Protocol",
    "RunMode",
]
