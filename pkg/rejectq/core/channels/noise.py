"""
Applying error models to photons, with seeded per-trial randomness.
"""

from __future__ import annotations

import logging
from typing import Iterable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from rejectq.core.channels.models import (
    BitFlip,
    CoherentRotation,
    ErrorModel,
    ErrorSequence,
    NoError,
    PhaseFlip,
)
from rejectq.core.errors import ChannelError
from rejectq.core.statevec import gates
from rejectq.core.statevec.state import LabelLike, PureState, apply_single, as_label

logger = logging.getLogger("rejectq.channels")


class ChannelEvent(BaseModel):
    """What one traversal of the channel did to one photon."""

    model_config = ConfigDict(frozen=True)

    label: str = Field(..., description="Photon that traversed the channel")
    flipped: bool = Field(False, description="Net bit flip (odd number of X)")
    angle: float = Field(0.0, description="Total coherent rotation angle in radians")
    phase_flipped: bool = Field(False, description="Net phase flip (odd number of Z)")


class ErrorRecord(BaseModel):
    """Ground-truth log of applied errors, one event per photon per traversal."""

    model_config = ConfigDict(frozen=True)

    events: List[ChannelEvent] = Field(default_factory=list)

    def flipped_labels(self) -> List[str]:
        return [event.label for event in self.events if event.flipped]

    def flip_count(self) -> int:
        return sum(event.flipped for event in self.events)


class RandomSource(BaseModel):
    """Master seed from which independent per-trial substreams are derived.

    The substream for a trial depends only on ``(master_seed, trial_index)``,
    so results do not depend on the order in which trials are executed.
    """

    model_config = ConfigDict(frozen=True)

    master_seed: int = Field(..., ge=0, lt=2**64, description="64-bit master seed")

    def substream(self, trial_index: int) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.master_seed, spawn_key=(trial_index,))
        return np.random.default_rng(sequence)


def _occurs(probability: float, rng: Optional[np.random.Generator], name: str) -> bool:
    if not 0.0 <= probability <= 1.0:
        raise ChannelError(f"{name} probability {probability} outside [0, 1]")
    if probability == 0.0:
        return False
    if probability == 1.0:
        return True
    if rng is None:
        raise ChannelError(
            f"{name}({probability:g}) is stochastic; trajectory mode needs a random substream"
        )
    return bool(rng.random() < probability)


def _apply(
    state: PureState,
    target: LabelLike,
    model: ErrorModel,
    rng: Optional[np.random.Generator],
    tally: list,
) -> PureState:
    if isinstance(model, NoError):
        return state
    if isinstance(model, BitFlip):
        if _occurs(model.p, rng, "bit_flip"):
            tally[0] += 1
            return apply_single(state, target, gates.X)
        return state
    if isinstance(model, PhaseFlip):
        if _occurs(model.pz, rng, "phase_flip"):
            tally[2] += 1
            return apply_single(state, target, gates.Z)
        return state
    if isinstance(model, CoherentRotation):
        tally[1] += model.theta
        return apply_single(state, target, gates.rotation_x(model.theta))
    if isinstance(model, ErrorSequence):
        for member in model.members:
            state = _apply(state, target, member, rng, tally)
        return state
    raise ChannelError(f"Unsupported error model: {model!r}")


def _traverse(
    state: PureState,
    target: LabelLike,
    model: ErrorModel,
    rng: Optional[np.random.Generator],
) -> Tuple[PureState, ChannelEvent]:
    label = as_label(target)
    state.index(label)
    tally = [0, 0.0, 0]
    updated = _apply(state, label, model, rng, tally)
    event = ChannelEvent(
        label=str(label),
        flipped=bool(tally[0] % 2),
        angle=float(tally[1]),
        phase_flipped=bool(tally[2] % 2),
    )
    if event.flipped or event.phase_flipped:
        logger.debug("Channel on %s applied %s", label, event)
    return updated, event


def apply_channel(
    state: PureState,
    target: LabelLike,
    model: ErrorModel,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[PureState, ErrorRecord]:
    """Send one photon through a noisy channel.

    Args:
        state: Joint state containing the photon
        target: Label of the transmitted photon
        model: Error model of the channel
        rng: Per-trial substream; needed only for stochastic members with
            probabilities strictly between 0 and 1

    Returns:
        The new state and a record with one event for this photon
    """
    updated, event = _traverse(state, target, model, rng)
    return updated, ErrorRecord(events=[event])


def apply_channels(
    state: PureState,
    models: Iterable[Tuple[LabelLike, ErrorModel]],
    rng: Optional[np.random.Generator] = None,
) -> Tuple[PureState, ErrorRecord]:
    """Apply a channel to each listed photon in order and merge the records."""
    events = []
    for target, model in models:
        state, event = _traverse(state, target, model, rng)
        events.append(event)
    return state, ErrorRecord.model_construct(events=events)
