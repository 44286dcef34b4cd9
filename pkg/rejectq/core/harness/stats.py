"""
Aggregated experiment statistics with Wilson score intervals.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

# Two-sided 95 % normal quantile.
Z_95 = 1.959963984540054

# Accepted runs below this fidelity are counted as fatal: Φ+ has fidelity 1,
# the flipped and phase-flipped Bell states have fidelity 0.
FATAL_FIDELITY = 0.5


def wilson_interval(successes: int, n: int, z: float = Z_95) -> Tuple[float, float, float]:
    """Wilson score interval for a binomial proportion.

    Returns:
        (point estimate, lower bound, upper bound); with ``n == 0`` the
        estimate is 0 and the interval is the whole of [0, 1]
    """
    if n == 0:
        return 0.0, 0.0, 1.0
    phat = successes / n
    denom = 1 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n))
    lo = max(0.0, center - half)
    hi = min(1.0, center + half)
    # Guard against rounding pushing the bounds past the estimate at 0 or 1.
    return phat, min(lo, phat), max(hi, phat)


class TrialResult(NamedTuple):
    accepted: bool
    fidelity: Optional[float]


class ExperimentStats(BaseModel):
    """One result row: a parameter value and the statistics measured at it."""

    model_config = ConfigDict(frozen=True)

    param: Optional[float] = Field(None, description="Swept p or theta")
    trials: int = Field(..., ge=1)
    accept_rate: float = Field(..., ge=0.0, le=1.0)
    accept_lo: float = Field(..., ge=0.0, le=1.0)
    accept_hi: float = Field(..., ge=0.0, le=1.0)
    mean_fidelity: Optional[float] = Field(
        None, description="Mean fidelity over accepted runs"
    )
    fatal_rate: float = Field(
        ..., ge=0.0, le=1.0, description="Fraction of accepted runs with fidelity < 0.5"
    )
    fatal_lo: float = Field(..., ge=0.0, le=1.0)
    fatal_hi: float = Field(..., ge=0.0, le=1.0)
    seed: int
    accepted: Optional[int] = Field(None, description="Accepted count (trajectory mode)")
    fatal: Optional[int] = Field(None, description="Fatal count (trajectory mode)")
    mode: str = "trajectory"
    wall_time: float = Field(0.0, description="Seconds spent; not written to result files")


def summarize_trials(
    results: Sequence[TrialResult],
    param: Optional[float],
    seed: int,
    wall_time: float = 0.0,
) -> ExperimentStats:
    """Aggregate per-trial results, iterating in trial order."""
    trials = len(results)
    fidelities = [r.fidelity for r in results if r.accepted and r.fidelity is not None]
    accepted = sum(1 for r in results if r.accepted)
    fatal = sum(1 for f in fidelities if f < FATAL_FIDELITY)

    accept_rate, accept_lo, accept_hi = wilson_interval(accepted, trials)
    fatal_rate, fatal_lo, fatal_hi = wilson_interval(fatal, accepted)
    mean_fidelity = math.fsum(fidelities) / len(fidelities) if fidelities else None
    return ExperimentStats(
        param=param,
        trials=trials,
        accept_rate=accept_rate,
        accept_lo=accept_lo,
        accept_hi=accept_hi,
        mean_fidelity=mean_fidelity,
        fatal_rate=fatal_rate,
        fatal_lo=fatal_lo,
        fatal_hi=fatal_hi,
        seed=seed,
        accepted=accepted,
        fatal=fatal,
        mode="trajectory",
        wall_time=wall_time,
    )


def summarize_exact(
    accept_mass: float,
    fidelity_mass: float,
    fatal_mass: float,
    trials: int,
    param: Optional[float],
    seed: int,
    wall_time: float = 0.0,
) -> ExperimentStats:
    """Statistics from probability-weighted branch sums; intervals collapse to points."""
    accept_rate = min(1.0, max(0.0, accept_mass))
    if accept_mass > 0:
        mean_fidelity: Optional[float] = min(1.0, fidelity_mass / accept_mass)
        fatal_rate = min(1.0, max(0.0, fatal_mass / accept_mass))
    else:
        mean_fidelity, fatal_rate = None, 0.0
    return ExperimentStats(
        param=param,
        trials=trials,
        accept_rate=accept_rate,
        accept_lo=accept_rate,
        accept_hi=accept_rate,
        mean_fidelity=mean_fidelity,
        fatal_rate=fatal_rate,
        fatal_lo=fatal_rate,
        fatal_hi=fatal_rate,
        seed=seed,
        mode="exact",
        wall_time=wall_time,
    )
