"""
Experiment configuration and its YAML persistence.
"""

from __future__ import annotations

import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from rejectq.core.channels.models import (
    NO_ERROR,
    BitFlip,
    CoherentRotation,
    ErrorModel,
    NoError,
    PhaseFlip,
)
from rejectq.core.errors import ConfigError
from rejectq.core.statevec.state import QubitLabel

logger = logging.getLogger("rejectq.config")

DEFAULT_CONFIG_PATH = "./.rejectq/config.yaml"


class Protocol(str, Enum):
    REPETITION_CORRECT = "repetition_correct"
    PARITY_REJECT = "parity_reject"
    TELEPORT = "teleport"
    OPTICAL_REJECT = "optical_reject"
    END_TO_END = "end_to_end"
    DUAL_DISTRIBUTION = "dual_distribution"

    def __str__(self) -> str:
        """Return the enum value instead of the full enum representation."""
        return self.value


class ErrorModelKind(str, Enum):
    NONE = "none"
    BITFLIP = "bitflip"
    ROTATION = "rotation"
    PHASEFLIP = "phaseflip"

    def __str__(self) -> str:
        return self.value


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"

    def __str__(self) -> str:
        return self.value


class RunMode(str, Enum):
    TRAJECTORY = "trajectory"
    EXACT = "exact"

    def __str__(self) -> str:
        return self.value


# Photons that cross a noisy channel, in the order the protocol applies them.
CHANNEL_POSITIONS: Dict[Protocol, Tuple[QubitLabel, ...]] = {
    Protocol.REPETITION_CORRECT: (
        QubitLabel.PARTICLE1,
        QubitLabel.ANCILLA_1,
        QubitLabel.ANCILLA_2,
    ),
    Protocol.PARITY_REJECT: (QubitLabel.PARTICLE1, QubitLabel.ANCILLA_1),
    Protocol.TELEPORT: (),
    Protocol.OPTICAL_REJECT: (QubitLabel.PARTICLE3, QubitLabel.PARTICLE4),
    Protocol.END_TO_END: (QubitLabel.PARTICLE3, QubitLabel.PARTICLE4),
    Protocol.DUAL_DISTRIBUTION: (
        QubitLabel.PARTICLE3_LEFT,
        QubitLabel.PARTICLE4_LEFT,
        QubitLabel.PARTICLE3_RIGHT,
        QubitLabel.PARTICLE4_RIGHT,
    ),
}

# Protocols whose target depends on a transmitted input qubit.
INPUT_PROTOCOLS = frozenset(
    {
        Protocol.REPETITION_CORRECT,
        Protocol.PARITY_REJECT,
        Protocol.TELEPORT,
        Protocol.END_TO_END,
    }
)


class InputState(BaseModel):
    """Bloch angles of a fixed input qubit cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>."""

    model_config = ConfigDict(frozen=True)

    theta: float = Field(..., allow_inf_nan=False)
    phi: float = Field(0.0, allow_inf_nan=False)


class ExperimentConfig(BaseModel):
    """Everything needed to reproduce one experiment or sweep."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    protocol: Protocol = Field(Protocol.OPTICAL_REJECT, description="Protocol to run")
    error_model: ErrorModelKind = Field(
        ErrorModelKind.NONE, description="Shorthand model applied to the targeted positions"
    )
    p: float = Field(0.0, ge=0.0, le=1.0, description="Flip probability (bitflip/phaseflip)")
    theta: float = Field(0.0, allow_inf_nan=False, description="Rotation angle in radians")
    targets: Optional[List[QubitLabel]] = Field(
        None, description="Channel positions receiving the shorthand model (default: all)"
    )
    channels: Optional[Dict[QubitLabel, ErrorModel]] = Field(
        None, description="Explicit per-position error models; overrides the shorthand"
    )
    trials: int = Field(1000, ge=1, description="Independent protocol runs per parameter value")
    master_seed: int = Field(0, ge=0, lt=2**64, description="64-bit master seed")
    sweep: Optional[List[float]] = Field(None, description="Values substituted for p or theta")
    output_path: Optional[str] = Field(None, description="Result file")
    output_format: OutputFormat = Field(OutputFormat.CSV)
    workers: int = Field(1, ge=1, description="Worker processes for trial execution")
    mode: RunMode = Field(RunMode.TRAJECTORY, description="Monte Carlo or exact enumeration")
    input_state: Optional[InputState] = Field(
        None, description="Fixed input qubit; Haar-random per trial when unset"
    )

    @model_validator(mode="after")
    def _check_positions(self) -> ExperimentConfig:
        positions = CHANNEL_POSITIONS[self.protocol]
        for label in list(self.targets or []) + list(self.channels or {}):
            if label not in positions:
                raise ValueError(
                    f"Protocol {self.protocol} has no channel position {label}; "
                    f"valid positions: {[str(p) for p in positions] or 'none'}"
                )
        if not positions:
            noisy = self.error_model is not ErrorModelKind.NONE or any(
                not isinstance(m, NoError) for m in (self.channels or {}).values()
            )
            if noisy:
                raise ValueError(f"Protocol {self.protocol} does not use a noisy channel")
        if self.sweep is not None:
            if self.channels:
                raise ValueError("A sweep varies the shorthand model; drop 'channels'")
            if self.error_model is ErrorModelKind.NONE:
                raise ValueError("A sweep needs an error model to vary")
            for value in self.sweep:
                self._check_value(value)
        return self

    def _check_value(self, value: float) -> None:
        if self.error_model in (ErrorModelKind.BITFLIP, ErrorModelKind.PHASEFLIP):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"Sweep value {value} outside [0, 1] for {self.error_model}")
        elif not math.isfinite(value):
            raise ValueError(f"Sweep value {value} is not finite")

    @property
    def positions(self) -> Tuple[QubitLabel, ...]:
        return CHANNEL_POSITIONS[self.protocol]

    @property
    def parameter(self) -> Optional[float]:
        """Current value of the swept quantity, or None without a shorthand model."""
        if self.channels:
            return None
        if self.error_model is ErrorModelKind.ROTATION:
            return self.theta
        if self.error_model in (ErrorModelKind.BITFLIP, ErrorModelKind.PHASEFLIP):
            return self.p
        return None

    def with_parameter(self, value: float) -> ExperimentConfig:
        """Copy with p or theta replaced, as done for each sweep point."""
        field = "theta" if self.error_model is ErrorModelKind.ROTATION else "p"
        data = self.model_dump()
        data.update({field: value, "sweep": None})
        return ExperimentConfig.model_validate(data)

    def shorthand_model(self) -> ErrorModel:
        if self.error_model is ErrorModelKind.BITFLIP:
            return BitFlip(p=self.p)
        if self.error_model is ErrorModelKind.PHASEFLIP:
            return PhaseFlip(pz=self.p)
        if self.error_model is ErrorModelKind.ROTATION:
            return CoherentRotation(theta=self.theta)
        return NO_ERROR

    def channel_models(self) -> Dict[QubitLabel, ErrorModel]:
        """Error model for every channel position of the protocol."""
        if self.channels:
            return {label: self.channels.get(label, NO_ERROR) for label in self.positions}
        model = self.shorthand_model()
        targeted = set(self.targets) if self.targets else set(self.positions)
        return {
            label: (model if label in targeted else NO_ERROR) for label in self.positions
        }


class ConfigManager:
    """Loads an ExperimentConfig from YAML and layers overrides on top."""

    def __init__(self, config_path: Optional[str] = None) -> None:
        self.config_path = config_path or DEFAULT_CONFIG_PATH

    def load_raw(self) -> Dict[str, Any]:
        path = Path(self.config_path)
        if not path.exists():
            logger.debug("No configuration file at %s, using defaults", path)
            return {}
        try:
            data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Could not parse {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"{path} must contain a mapping at the top level")
        return data

    def load(self, **overrides: Any) -> ExperimentConfig:
        """File values first, then every override that is not None.

        Raises:
            ConfigError: if the merged document is not a valid configuration
        """
        data = self.load_raw()
        data.update({key: value for key, value in overrides.items() if value is not None})
        try:
            return ExperimentConfig.model_validate(data)
        except ValidationError as e:
            raise ConfigError(str(e)) from e

    def save(self, config: ExperimentConfig) -> None:
        path = Path(self.config_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        document = config.model_dump(mode="json", exclude_none=True)
        path.write_text(yaml.safe_dump(document, sort_keys=False), encoding="utf-8")
