"""
Experiment runner: per-trial execution, exact branch enumeration and sweeps.
"""

from __future__ import annotations

import itertools
import logging
import math
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import (
    Callable,
    Dict,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from rejectq.core.channels.models import ErrorModel, enumerate_branches
from rejectq.core.channels.noise import RandomSource
from rejectq.core.config.settings import (
    INPUT_PROTOCOLS,
    ExperimentConfig,
    Protocol,
    RunMode,
)
from rejectq.core.errors import ConfigError, ZeroProbabilityError
from rejectq.core.harness.export import write_results
from rejectq.core.harness.stats import (
    FATAL_FIDELITY,
    ExperimentStats,
    TrialResult,
    summarize_exact,
    summarize_trials,
)
from rejectq.core.protocols.optical import (
    dual_distribution,
    end_to_end_teleport,
    optical_reject_transmit,
)
from rejectq.core.protocols.outcome import ForcedOutcomes, ProtocolOutcome
from rejectq.core.protocols.repetition import parity_reject, repetition_correct
from rejectq.core.protocols.teleportation import teleport
from rejectq.core.statevec.state import PureState, qubit_from_bloch, random_qubit

logger = logging.getLogger("rejectq.harness")

Corrections = Optional[Mapping[int, np.ndarray]]
ProgressCallback = Callable[[int], None]

# Upper bound on the trials handed to a worker at once.
MAX_CHUNK = 1000

# Every combination of measurement outcomes a protocol can produce.
FORCED_BRANCHES = {
    Protocol.REPETITION_CORRECT: [
        ForcedOutcomes(syndrome=bits) for bits in itertools.product((0, 1), repeat=2)
    ],
    Protocol.PARITY_REJECT: [ForcedOutcomes(ancilla=bit) for bit in (0, 1)],
    Protocol.TELEPORT: [ForcedOutcomes(bell=k) for k in range(4)],
    Protocol.OPTICAL_REJECT: [ForcedOutcomes(b=bit) for bit in (0, 1)],
    Protocol.END_TO_END: [
        ForcedOutcomes(b=bit, bell=k) for bit in (0, 1) for k in range(4)
    ],
    Protocol.DUAL_DISTRIBUTION: [
        ForcedOutcomes(b=left, b_right=right) for left in (0, 1) for right in (0, 1)
    ],
}

# Input used by exact mode when the configuration fixes none: |+>.
DEFAULT_EXACT_INPUT = (math.pi / 2, 0.0)
_DEFAULT_INPUT = qubit_from_bloch(*DEFAULT_EXACT_INPUT)


def run_protocol(
    protocol: Protocol,
    models: Sequence[ErrorModel],
    input_state: PureState,
    rng: Optional[np.random.Generator] = None,
    forced: Optional[ForcedOutcomes] = None,
    corrections: Corrections = None,
) -> ProtocolOutcome:
    """Run one protocol with models given in its channel-position order."""
    if protocol is Protocol.REPETITION_CORRECT:
        alpha, beta = input_state.amplitudes
        return repetition_correct(alpha, beta, *models, rng=rng, forced=forced)
    if protocol is Protocol.PARITY_REJECT:
        alpha, beta = input_state.amplitudes
        return parity_reject(alpha, beta, *models, rng=rng, forced=forced)
    if protocol is Protocol.TELEPORT:
        return teleport(input_state, rng=rng, forced=forced, corrections=corrections)
    if protocol is Protocol.OPTICAL_REJECT:
        return optical_reject_transmit(*models, rng=rng, forced=forced)
    if protocol is Protocol.END_TO_END:
        return end_to_end_teleport(
            input_state, *models, rng=rng, forced=forced, corrections=corrections
        )
    if protocol is Protocol.DUAL_DISTRIBUTION:
        return dual_distribution(*models, rng=rng, forced=forced)
    raise ConfigError(f"Unknown protocol: {protocol}")


def _models(config: ExperimentConfig) -> List[ErrorModel]:
    channel_models = config.channel_models()
    return [channel_models[label] for label in config.positions]


def _fixed_input(config: ExperimentConfig) -> Optional[PureState]:
    if config.input_state is None:
        return None
    return qubit_from_bloch(config.input_state.theta, config.input_state.phi)


class _TrialPlan(NamedTuple):
    """Per-experiment state shared by every trial."""

    source: RandomSource
    models: List[ErrorModel]
    fixed_input: Optional[PureState]


def _plan(config: ExperimentConfig) -> _TrialPlan:
    return _TrialPlan(
        RandomSource(master_seed=config.master_seed), _models(config), _fixed_input(config)
    )


def _execute(
    config: ExperimentConfig,
    plan: _TrialPlan,
    trial_index: int,
    corrections: Corrections,
) -> TrialResult:
    rng = plan.source.substream(trial_index)
    input_state = plan.fixed_input
    if input_state is None:
        input_state = (
            random_qubit(rng) if config.protocol in INPUT_PROTOCOLS else _DEFAULT_INPUT
        )
    outcome = run_protocol(
        config.protocol, plan.models, input_state, rng=rng, corrections=corrections
    )
    return TrialResult(outcome.accepted, outcome.fidelity)


def run_trial(
    config: ExperimentConfig,
    trial_index: int,
    models: Optional[Sequence[ErrorModel]] = None,
    corrections: Corrections = None,
) -> TrialResult:
    """One protocol run on the substream of ``trial_index``.

    For protocols that transmit an input qubit the substream first draws a
    Haar-random input, unless the config fixes one. Channel events and
    measurement outcomes follow.
    """
    plan = _plan(config)
    if models is not None:
        plan = plan._replace(models=list(models))
    return _execute(config, plan, trial_index, corrections)


def _chunks(trials: int, workers: int) -> List[range]:
    size = max(1, min(MAX_CHUNK, math.ceil(trials / workers)))
    return [range(start, min(start + size, trials)) for start in range(0, trials, size)]


def _run_chunk(
    config: ExperimentConfig, corrections: Corrections, indices: range
) -> Tuple[int, List[TrialResult]]:
    """Run one chunk of trials; returns its start index with the results."""
    plan = _plan(config)
    return indices.start, [_execute(config, plan, i, corrections) for i in indices]


def _run_trials(
    config: ExperimentConfig,
    corrections: Corrections,
    progress: Optional[ProgressCallback],
) -> List[TrialResult]:
    results: List[TrialResult] = []
    chunks = _chunks(config.trials, config.workers)
    if config.workers == 1 or len(chunks) == 1:
        for chunk in chunks:
            _, chunk_results = _run_chunk(config, corrections, chunk)
            results.extend(chunk_results)
            if progress:
                progress(len(chunk_results))
        return results

    # Fresh interpreters: forking would copy the console's refresh thread.
    by_start: Dict[int, List[TrialResult]] = {}
    context = multiprocessing.get_context("spawn")
    with ProcessPoolExecutor(max_workers=config.workers, mp_context=context) as executor:
        futures = [
            executor.submit(_run_chunk, config, corrections, chunk) for chunk in chunks
        ]
        for future in as_completed(futures):
            start, chunk_results = future.result()
            by_start[start] = chunk_results
            if progress:
                progress(len(chunk_results))
    for chunk in chunks:
        results.extend(by_start[chunk.start])
    return results


def enumerate_outcomes(
    config: ExperimentConfig,
    corrections: Corrections = None,
) -> Iterator[Tuple[float, ProtocolOutcome]]:
    """Every accepted branch with its total probability.

    Channel branches come from ``enumerate_branches`` per position; each is
    combined with every forced measurement outcome. Outcomes that cannot
    occur on a branch are skipped.
    """
    input_state = _fixed_input(config) or _DEFAULT_INPUT
    per_position = [enumerate_branches(model) for model in _models(config)]
    for combo in itertools.product(*per_position):
        weight = math.prod(w for w, _ in combo)
        models = [model for _, model in combo]
        for forced in FORCED_BRANCHES[config.protocol]:
            try:
                outcome = run_protocol(
                    config.protocol,
                    models,
                    input_state,
                    forced=forced,
                    corrections=corrections,
                )
            except ZeroProbabilityError:
                continue
            if outcome.accepted:
                yield weight * outcome.probability, outcome


def _exact_stats(
    config: ExperimentConfig, corrections: Corrections, started: float
) -> ExperimentStats:
    weights: List[float] = []
    weighted_fidelity: List[float] = []
    fatal: List[float] = []
    for weight, outcome in enumerate_outcomes(config, corrections):
        weights.append(weight)
        weighted_fidelity.append(weight * outcome.fidelity)
        if outcome.fidelity < FATAL_FIDELITY:
            fatal.append(weight)
    return summarize_exact(
        math.fsum(weights),
        math.fsum(weighted_fidelity),
        math.fsum(fatal),
        trials=config.trials,
        param=config.parameter,
        seed=config.master_seed,
        wall_time=time.perf_counter() - started,
    )


def _measure(
    config: ExperimentConfig,
    corrections: Corrections = None,
    progress: Optional[ProgressCallback] = None,
) -> ExperimentStats:
    started = time.perf_counter()
    if config.mode is RunMode.EXACT:
        stats = _exact_stats(config, corrections, started)
        if progress:
            progress(config.trials)
        return stats
    results = _run_trials(config, corrections, progress)
    return summarize_trials(
        results,
        param=config.parameter,
        seed=config.master_seed,
        wall_time=time.perf_counter() - started,
    )


def run_experiment(
    config: ExperimentConfig,
    corrections: Corrections = None,
    progress: Optional[ProgressCallback] = None,
) -> ExperimentStats:
    """Run ``config.trials`` independent trials and aggregate them.

    Args:
        config: Validated experiment configuration
        corrections: Override of the teleportation correction table
        progress: Called with the number of trials finished after each chunk

    Returns:
        Statistics for the configured parameter value; written to
        ``config.output_path`` when set

    Raises:
        OutputError: if the result file cannot be written
    """
    logger.info(
        "Running %s (%s mode, %d trials, seed %d)",
        config.protocol,
        config.mode,
        config.trials,
        config.master_seed,
    )
    stats = _measure(config, corrections, progress)
    if config.output_path:
        write_results([stats], config.output_path, config.output_format)
    return stats


def sweep(
    config: ExperimentConfig,
    corrections: Corrections = None,
    progress: Optional[ProgressCallback] = None,
) -> List[ExperimentStats]:
    """One experiment per sweep value, rows ordered by parameter.

    Every point reuses the master seed, so each row is reproducible on its own.

    Raises:
        ConfigError: if the config has no sweep values
        OutputError: if the result file cannot be written
    """
    if not config.sweep:
        raise ConfigError("A sweep needs at least one parameter value")
    rows = []
    for value in sorted(config.sweep):
        point = config.with_parameter(value)
        logger.debug("Sweep point %s = %r", config.error_model, value)
        rows.append(_measure(point, corrections, progress))
    if config.output_path:
        write_results(rows, config.output_path, config.output_format)
    return rows
