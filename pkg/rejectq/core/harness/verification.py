"""
Self-check suite: closed-form laws, exactness and reproducibility.

Each check compares a measured quantity against an independently derived
value (flip-pattern enumeration, expansion of the GHZ state under a rotation,
or the Fock-space oracle) and reports both.
"""

from __future__ import annotations

import itertools
import logging
import math
import tempfile
import time
from pathlib import Path
from typing import Callable, List, Mapping, NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, Field

from rejectq.core.channels.models import NO_ERROR, BitFlip, PhaseFlip
from rejectq.core.channels.noise import RandomSource
from rejectq.core.config.settings import (
    ErrorModelKind,
    ExperimentConfig,
    InputState,
    Protocol,
    RunMode,
)
from rejectq.core.harness.runner import run_experiment, sweep
from rejectq.core.optics.fock import coincidence_project, pbs_transform
from rejectq.core.protocols.optical import (
    end_to_end_teleport,
    optical_reject_transmit,
    parity_projection,
)
from rejectq.core.protocols.outcome import ForcedOutcomes
from rejectq.core.protocols.repetition import repetition_correct
from rejectq.core.protocols.teleportation import teleport
from rejectq.core.statevec.state import (
    PureState,
    QubitLabel,
    bell_state,
    random_qubit,
)

logger = logging.getLogger("rejectq.verify")

EXACT_TOL = 1e-12
DEFAULT_TRIALS = 100_000
DEFAULT_SEED = 20240607
FLIP_P = 0.1
# Half-open [0, π): cos²θ has period π, so π would repeat θ = 0.
ROTATION_ANGLES = np.linspace(0.0, math.pi, 50, endpoint=False)


class CheckResult(BaseModel):
    """Outcome of one verification check."""

    name: str = Field(..., description="Short identifier of the check")
    passed: bool
    measured: str = Field(..., description="Measured value(s)")
    expected: str = Field(..., description="Expected value(s) and tolerance")
    detail: str = ""
    runtime: float = Field(0.0, description="Seconds spent on the check")


class VerificationReport(BaseModel):
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]


class _Measured(NamedTuple):
    passed: bool
    measured: str
    expected: str
    detail: str = ""


def two_photon_acceptance(p: float) -> float:
    """Coincidence probability with independent flips on both photons: (1-p)² + p²."""
    return (1 - p) ** 2 + p**2


def _enumerated_acceptance(p: float, photons: int) -> float:
    """Sum the weights of every flip pattern that passes each pairwise parity check."""
    total = 0.0
    for pattern in itertools.product((0, 1), repeat=photons):
        weight = math.prod(p if flip else 1 - p for flip in pattern)
        pairs = zip(pattern[0::2], pattern[1::2])
        if all(a == b for a, b in pairs):
            total += weight
    return total


def _enumerated_fatal(p: float) -> float:
    """Both photons flipped, given that the pair was accepted."""
    return p * p / _enumerated_acceptance(p, 2)


def _within(value: float, expected: float, sigma: float, k: float = 3.0) -> bool:
    return abs(value - expected) <= k * sigma


def check_exact_pair_states() -> _Measured:
    errors, probabilities = [], []
    for b, bell_index in ((0, 0), (1, 1)):
        outcome = optical_reject_transmit(forced=ForcedOutcomes(b=b), phase_fix=False)
        expected = bell_state(bell_index, [QubitLabel.PARTICLE2, QubitLabel.ARM_A])
        deviation = outcome.final_state.amplitudes - expected.amplitudes
        errors.append(float(np.max(np.abs(deviation))))
        probabilities.append(outcome.probability)
    passed = max(errors) < EXACT_TOL and all(
        abs(p - 0.5) < EXACT_TOL for p in probabilities
    )
    return _Measured(
        passed,
        f"amplitude error {max(errors):.2e}, P(b) = {probabilities}",
        "Φ+ for b=0, Φ− for b=1, error < 1e-12, P(b) = 0.5",
    )


def check_single_flip_rejection() -> _Measured:
    patterns = [
        (Protocol.OPTICAL_REJECT, label)
        for label in (QubitLabel.PARTICLE3, QubitLabel.PARTICLE4)
    ] + [
        (Protocol.DUAL_DISTRIBUTION, label)
        for label in (
            QubitLabel.PARTICLE3_LEFT,
            QubitLabel.PARTICLE4_LEFT,
            QubitLabel.PARTICLE3_RIGHT,
            QubitLabel.PARTICLE4_RIGHT,
        )
    ]
    accepted = []
    for protocol, label in patterns:
        config = ExperimentConfig(
            protocol=protocol, channels={label: BitFlip(p=1.0)}, mode=RunMode.EXACT
        )
        accepted.append(run_experiment(config).accept_rate)
    return _Measured(
        max(accepted) <= EXACT_TOL,
        f"max acceptance {max(accepted):.2e} over {len(patterns)} patterns",
        "acceptance 0 for every single-photon flip",
    )


def check_double_error_residual(trials: int, seed: int, workers: int) -> _Measured:
    accept_oracle = _enumerated_acceptance(FLIP_P, 2)
    fatal_oracle = _enumerated_fatal(FLIP_P)
    exact = run_experiment(
        ExperimentConfig(
            protocol=Protocol.OPTICAL_REJECT,
            error_model=ErrorModelKind.BITFLIP,
            p=FLIP_P,
            mode=RunMode.EXACT,
        )
    )
    sampled = run_experiment(
        ExperimentConfig(
            protocol=Protocol.OPTICAL_REJECT,
            error_model=ErrorModelKind.BITFLIP,
            p=FLIP_P,
            trials=trials,
            master_seed=seed,
            workers=workers,
        )
    )
    accept_sigma = math.sqrt(accept_oracle * (1 - accept_oracle) / trials)
    accepted = max(sampled.accepted or 0, 1)
    fatal_sigma = math.sqrt(fatal_oracle * (1 - fatal_oracle) / accepted)
    passed = (
        abs(accept_oracle - two_photon_acceptance(FLIP_P)) < EXACT_TOL
        and abs(exact.accept_rate - accept_oracle) < EXACT_TOL
        and abs(exact.fatal_rate - fatal_oracle) < EXACT_TOL
        and _within(sampled.accept_rate, accept_oracle, accept_sigma)
        and _within(sampled.fatal_rate, fatal_oracle, fatal_sigma)
    )
    return _Measured(
        passed,
        f"accept {sampled.accept_rate:.5f}, fatal {sampled.fatal_rate:.6f} "
        f"(exact {exact.accept_rate:.6f}, {exact.fatal_rate:.6f})",
        f"accept {accept_oracle:.4f} ± 3σ, fatal {fatal_oracle:.6f} ± 3σ",
        f"{trials} trials",
    )


def check_rotation_quantization() -> _Measured:
    worst_accept, worst_fidelity = 0.0, 0.0
    for theta in ROTATION_ANGLES:
        stats = run_experiment(
            ExperimentConfig(
                protocol=Protocol.OPTICAL_REJECT,
                error_model=ErrorModelKind.ROTATION,
                theta=float(theta),
                targets=[QubitLabel.PARTICLE3],
                mode=RunMode.EXACT,
            )
        )
        worst_accept = max(worst_accept, abs(stats.accept_rate - math.cos(theta) ** 2))
        if stats.mean_fidelity is not None:
            worst_fidelity = max(worst_fidelity, abs(stats.mean_fidelity - 1.0))
    return _Measured(
        worst_accept < EXACT_TOL and worst_fidelity < EXACT_TOL,
        f"max |A - cos²θ| = {worst_accept:.2e}, max |F - 1| = {worst_fidelity:.2e}",
        "both < 1e-12 over 50 angles in [0, π)",
    )


def check_phase_error_blindness() -> _Measured:
    stats = run_experiment(
        ExperimentConfig(
            protocol=Protocol.END_TO_END,
            channels={QubitLabel.PARTICLE3: PhaseFlip(pz=1.0)},
            mode=RunMode.EXACT,
            input_state=InputState(theta=math.pi / 2, phi=0.0),
        )
    )
    fidelity = stats.mean_fidelity if stats.mean_fidelity is not None else float("nan")
    return _Measured(
        abs(stats.accept_rate - 1.0) < EXACT_TOL and abs(fidelity) < EXACT_TOL,
        f"acceptance {stats.accept_rate:.6f}, fidelity {fidelity:.6f}",
        "acceptance 1, fidelity 0: the parity check cannot see phase errors",
    )


def check_repetition_code() -> _Measured:
    flip = BitFlip(p=1.0)
    patterns = [
        (NO_ERROR, NO_ERROR, NO_ERROR),
        (flip, NO_ERROR, NO_ERROR),
        (NO_ERROR, flip, NO_ERROR),
        (NO_ERROR, NO_ERROR, flip),
    ]
    worst = 0.0
    for t in np.linspace(0.0, math.pi / 2, 10):
        for phi in np.linspace(0.0, 2 * math.pi, 10, endpoint=False):
            alpha = math.cos(t)
            beta = complex(math.cos(phi), math.sin(phi)) * math.sin(t)
            for models in patterns:
                outcome = repetition_correct(alpha, beta, *models)
                worst = max(worst, 1.0 - outcome.fidelity)
    return _Measured(
        worst < EXACT_TOL,
        f"max infidelity {worst:.2e}",
        "fidelity 1 within 1e-12 on a 10×10 (α, β) grid, 4 error patterns",
    )


def check_teleportation(
    seed: int, corrections: Optional[Mapping[int, np.ndarray]] = None
) -> _Measured:
    source = RandomSource(master_seed=seed)
    worst_plain, worst_link = 0.0, 0.0
    for i in range(100):
        state = random_qubit(source.substream(i))
        for bell in range(4):
            forced = ForcedOutcomes(bell=bell)
            outcome = teleport(state, forced=forced, corrections=corrections)
            worst_plain = max(worst_plain, 1.0 - outcome.fidelity)
            for b in (0, 1):
                linked = end_to_end_teleport(
                    state, forced=ForcedOutcomes(bell=bell, b=b), corrections=corrections
                )
                worst_link = max(worst_link, 1.0 - linked.fidelity)
    return _Measured(
        worst_plain < EXACT_TOL and worst_link < EXACT_TOL,
        f"max infidelity {worst_plain:.2e} (teleport), {worst_link:.2e} (end-to-end)",
        "fidelity 1 within 1e-12 for 100 inputs on every outcome branch",
    )


def check_fock_oracle(seed: int) -> _Measured:
    rng = RandomSource(master_seed=seed).substream(0)
    worst_probability, mismatched = 0.0, 0
    for _ in range(1000):
        vector = rng.normal(size=4) + 1j * rng.normal(size=4)
        state = PureState.from_amplitudes(
            [QubitLabel.PARTICLE3, QubitLabel.PARTICLE4], vector, normalize=True
        )
        qubit_path = parity_projection(state, QubitLabel.PARTICLE3, QubitLabel.PARTICLE4)
        fock_path = coincidence_project(pbs_transform(state))
        worst_probability = max(
            worst_probability,
            abs(qubit_path.accept_probability - fock_path.accept_probability),
        )
        if (qubit_path.conditional is None) != (fock_path.conditional is None):
            mismatched += 1
        elif qubit_path.conditional is not None and not qubit_path.conditional.allclose(
            fock_path.conditional, atol=EXACT_TOL, up_to_phase=True
        ):
            mismatched += 1
    return _Measured(
        worst_probability < EXACT_TOL and mismatched == 0,
        f"max |ΔA| = {worst_probability:.2e}, {mismatched} state mismatches",
        "agreement within 1e-12 on 1000 random states",
    )


def check_two_sided_law(trials: int, seed: int, workers: int) -> _Measured:
    oracle = _enumerated_acceptance(FLIP_P, 4)
    stats = run_experiment(
        ExperimentConfig(
            protocol=Protocol.DUAL_DISTRIBUTION,
            error_model=ErrorModelKind.BITFLIP,
            p=FLIP_P,
            trials=trials,
            master_seed=seed,
            workers=workers,
        )
    )
    sigma = math.sqrt(oracle * (1 - oracle) / trials)
    return _Measured(
        abs(oracle - two_photon_acceptance(FLIP_P) ** 2) < EXACT_TOL
        and _within(stats.accept_rate, oracle, sigma),
        f"acceptance {stats.accept_rate:.5f}",
        f"{oracle:.4f} ± 3σ (σ = {sigma:.2e})",
        f"{trials} trials",
    )


def check_reproducibility(seed: int, trials: int = 2000) -> _Measured:
    contents = []
    with tempfile.TemporaryDirectory() as tmp:
        for workers in (1, 8):
            path = Path(tmp) / f"sweep_{workers}.csv"
            sweep(
                ExperimentConfig(
                    protocol=Protocol.OPTICAL_REJECT,
                    error_model=ErrorModelKind.BITFLIP,
                    sweep=[0.0, 0.05, 0.1],
                    trials=trials,
                    master_seed=seed,
                    workers=workers,
                    output_path=str(path),
                )
            )
            contents.append(path.read_bytes())
    same = contents[0] == contents[1]
    return _Measured(
        same,
        "identical" if same else "files differ",
        "byte-identical CSV for 1 and 8 workers",
    )


def verify(
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    corrections: Optional[Mapping[int, np.ndarray]] = None,
    on_check: Optional[Callable[[CheckResult], None]] = None,
) -> VerificationReport:
    """Run every check and collect measured against expected values.

    Args:
        trials: Monte Carlo trials for the sampled checks
        seed: Master seed for sampled checks and random inputs
        workers: Worker processes for the sampled checks
        corrections: Teleportation correction table under test
        on_check: Called with each result as soon as it is available

    Returns:
        Report whose ``passed`` is False if any check failed
    """
    checks: List[tuple] = [
        ("pair states", check_exact_pair_states),
        ("single-flip rejection", check_single_flip_rejection),
        (
            "double-error residual",
            lambda: check_double_error_residual(trials, seed, workers),
        ),
        ("rotation quantization", check_rotation_quantization),
        ("phase-error blindness", check_phase_error_blindness),
        ("repetition code", check_repetition_code),
        ("teleportation", lambda: check_teleportation(seed, corrections)),
        ("fock oracle", lambda: check_fock_oracle(seed)),
        ("two-sided law", lambda: check_two_sided_law(trials, seed, workers)),
        ("reproducibility", lambda: check_reproducibility(seed)),
    ]
    report = VerificationReport()
    for name, run in checks:
        started = time.perf_counter()
        measured = run()
        result = CheckResult(
            name=name,
            passed=measured.passed,
            measured=measured.measured,
            expected=measured.expected,
            detail=measured.detail,
            runtime=time.perf_counter() - started,
        )
        logger.info("%s: %s", name, "pass" if result.passed else "FAIL")
        report.checks.append(result)
        if on_check:
            on_check(result)
    return report
