"""
Result models shared by all protocols.
"""

from __future__ import annotations

from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from rejectq.core.channels.noise import ErrorRecord
from rejectq.core.statevec.state import PureState


class Verdict(str, Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"

    def __str__(self) -> str:
        return self.value


class ClassicalMessage(BaseModel):
    """Classical bits sent alongside the quantum transmission."""

    model_config = ConfigDict(frozen=True)

    bell_outcome: Optional[int] = Field(
        None, ge=0, le=3, description="Bell-measurement outcome (0:Φ+, 1:Φ−, 2:Ψ+, 3:Ψ−)"
    )
    b_outcome: Optional[int] = Field(
        None, ge=0, le=1, description="Arm-b outcome in the diagonal basis (0 = 0', 1 = 1')"
    )
    b_outcome_right: Optional[int] = Field(
        None, ge=0, le=1, description="Right-side arm-b outcome in two-sided distribution"
    )
    syndrome_bits: Optional[Tuple[int, int]] = Field(
        None, description="Ancilla readout of the repetition code"
    )
    ancilla_outcome: Optional[int] = Field(
        None, ge=0, le=1, description="Parity ancilla readout of the rejection code"
    )


class ForcedOutcomes(BaseModel):
    """Outcomes to select deterministically instead of sampling.

    Unset fields fall back to the rng passed to the protocol.
    """

    model_config = ConfigDict(frozen=True)

    bell: Optional[int] = Field(None, ge=0, le=3)
    b: Optional[int] = Field(None, ge=0, le=1)
    b_right: Optional[int] = Field(None, ge=0, le=1)
    syndrome: Optional[Tuple[int, int]] = None
    ancilla: Optional[int] = Field(None, ge=0, le=1)


class ProtocolOutcome(BaseModel):
    """Verdict, classical record and final state of one protocol run."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    verdict: Verdict
    message: ClassicalMessage = Field(default_factory=ClassicalMessage)
    final_state: Optional[PureState] = None
    target_state: PureState
    fidelity: Optional[float] = Field(None, ge=0.0, le=1.0)
    error_record: ErrorRecord = Field(default_factory=ErrorRecord)
    probability: float = Field(
        1.0, ge=0.0, le=1.0 + 1e-9, description="Born weight of the realised branch"
    )
    accept_probability: Optional[float] = Field(
        None, description="Probability that the parity check(s) pass"
    )

    @model_validator(mode="after")
    def _accepted_has_state(self) -> ProtocolOutcome:
        if self.verdict is Verdict.ACCEPTED and (
            self.final_state is None or self.fidelity is None
        ):
            raise ValueError("An accepted outcome needs a final state and a fidelity")
        return self

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPTED

    def flipped_labels(self) -> List[str]:
        return self.error_record.flipped_labels()
