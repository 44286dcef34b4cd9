"""
Declarative per-photon error models.

Models are immutable pydantic documents discriminated by ``kind`` so they can
be written directly in an experiment configuration file::

    channels:
      particle3: {kind: bit_flip, p: 0.1}
      particle4:
        kind: sequence
        members:
          - {kind: coherent_rotation, theta: 0.3}
          - {kind: phase_flip, pz: 0.05}
"""

from __future__ import annotations

import itertools
from typing import Annotated, Any, List, Literal, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from rejectq.core.errors import ChannelError


class _Model(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class NoError(_Model):
    """Perfect channel."""

    kind: Literal["none"] = "none"


class BitFlip(_Model):
    """Pauli X applied with probability ``p``."""

    kind: Literal["bit_flip"] = "bit_flip"
    p: float = Field(..., ge=0.0, le=1.0, description="Flip probability")


class CoherentRotation(_Model):
    """Deterministic rotation cos(theta)·I + i·sin(theta)·X."""

    kind: Literal["coherent_rotation"] = "coherent_rotation"
    theta: float = Field(..., allow_inf_nan=False, description="Rotation angle in radians")


class PhaseFlip(_Model):
    """Pauli Z applied with probability ``pz``; not detectable by the parity check."""

    kind: Literal["phase_flip"] = "phase_flip"
    pz: float = Field(..., ge=0.0, le=1.0, description="Phase-flip probability")


class ErrorSequence(_Model):
    """Members applied in order during one traversal."""

    kind: Literal["sequence"] = "sequence"
    members: List["ErrorModel"] = Field(..., min_length=1)


ErrorModel = Annotated[
    Union[NoError, BitFlip, CoherentRotation, PhaseFlip, ErrorSequence],
    Field(discriminator="kind"),
]

ErrorSequence.model_rebuild()

_ADAPTER: TypeAdapter[ErrorModel] = TypeAdapter(ErrorModel)

NO_ERROR = NoError()


def parse_error_model(data: Any) -> ErrorModel:
    """Validate a mapping (e.g. from YAML) into an ErrorModel.

    Raises:
        ChannelError: if the document does not describe a valid model
    """
    try:
        return _ADAPTER.validate_python(data)
    except ValidationError as e:
        raise ChannelError(f"Invalid error model {data!r}: {e}") from e


def is_deterministic(model: ErrorModel) -> bool:
    """True when applying the model needs no randomness."""
    if isinstance(model, BitFlip):
        return model.p in (0.0, 1.0)
    if isinstance(model, PhaseFlip):
        return model.pz in (0.0, 1.0)
    if isinstance(model, ErrorSequence):
        return all(is_deterministic(member) for member in model.members)
    return True


def enumerate_branches(model: ErrorModel) -> List[Tuple[float, ErrorModel]]:
    """Expand a stochastic model into weighted deterministic alternatives.

    ``bit_flip(p)`` becomes ``[(1-p, none), (p, bit_flip(1))]``; sequences
    expand to the product of their members' branches. Zero-weight branches
    are dropped, so the weights always sum to one.
    """
    if isinstance(model, BitFlip) and not is_deterministic(model):
        return [(1.0 - model.p, NO_ERROR), (model.p, BitFlip(p=1.0))]
    if isinstance(model, PhaseFlip) and not is_deterministic(model):
        return [(1.0 - model.pz, NO_ERROR), (model.pz, PhaseFlip(pz=1.0))]
    if isinstance(model, ErrorSequence):
        branches = []
        for combo in itertools.product(
            *(enumerate_branches(member) for member in model.members)
        ):
            weight = 1.0
            for w, _ in combo:
                weight *= w
            if weight > 0:
                branches.append((weight, ErrorSequence(members=[m for _, m in combo])))
        return branches
    return [(1.0, model)]


def describe(model: ErrorModel) -> str:
    """Short label used in logs and console tables."""
    if isinstance(model, BitFlip):
        return f"bit_flip(p={model.p:g})"
    if isinstance(model, CoherentRotation):
        return f"rotation(theta={model.theta:g})"
    if isinstance(model, PhaseFlip):
        return f"phase_flip(pz={model.pz:g})"
    if isinstance(model, ErrorSequence):
        return " -> ".join(describe(member) for member in model.members)
    return "none"
