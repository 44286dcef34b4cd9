"""
Tests for statistics, the experiment runner, sweeps and result files.
"""

import json
import math

import pytest

from rejectq.core.config.settings import (
    ErrorModelKind,
    ExperimentConfig,
    InputState,
    OutputFormat,
    Protocol,
    RunMode,
)
from rejectq.core.errors import ConfigError, OutputError
from rejectq.core.harness.export import CSV_FIELDS, to_csv, to_json
from rejectq.core.harness.runner import (
    _chunks,
    _run_chunk,
    enumerate_outcomes,
    run_experiment,
    run_trial,
    sweep,
)
from rejectq.core.harness.stats import (
    TrialResult,
    summarize_trials,
    wilson_interval,
)
from rejectq.core.statevec.state import QubitLabel

CSV_HEADER = (
    "param,trials,accept_rate,accept_lo,accept_hi,mean_fidelity,"
    "fatal_rate,fatal_lo,fatal_hi,seed"
)


def exact(protocol, **kwargs):
    return ExperimentConfig(protocol=protocol, mode=RunMode.EXACT, **kwargs)


def bitflip(protocol, p, **kwargs):
    return ExperimentConfig(
        protocol=protocol, error_model=ErrorModelKind.BITFLIP, p=p, **kwargs
    )


class TestWilsonInterval:
    @pytest.mark.parametrize("k, n", [(0, 10), (10, 10), (3, 10), (820, 1000), (1, 100000)])
    def test_contains_the_estimate(self, k, n):
        rate, lo, hi = wilson_interval(k, n)
        assert rate == k / n
        assert 0.0 <= lo <= rate <= hi <= 1.0

    def test_no_samples(self):
        assert wilson_interval(0, 0) == (0.0, 0.0, 1.0)

    def test_known_value(self):
        # 82 successes in 100 trials.
        _, lo, hi = wilson_interval(82, 100)
        assert lo == pytest.approx(0.7333, abs=5e-4)
        assert hi == pytest.approx(0.8830, abs=5e-4)

    @pytest.mark.parametrize("n", [20, 100])
    def test_coverage(self, n):
        # Probability, over Binomial(n, 1/2), that the interval covers 1/2.
        coverage = 0.0
        for k in range(n + 1):
            _, lo, hi = wilson_interval(k, n)
            if lo <= 0.5 <= hi:
                coverage += math.comb(n, k) / 2**n
        assert coverage >= 0.93


class TestSummaries:
    def test_fatal_rate_is_conditional_on_acceptance(self):
        results = [TrialResult(True, 1.0)] * 6 + [TrialResult(True, 0.0)] * 2
        results += [TrialResult(False, None)] * 2
        stats = summarize_trials(results, param=0.1, seed=3)
        assert stats.accept_rate == 0.8
        assert stats.fatal_rate == 0.25
        assert stats.mean_fidelity == pytest.approx(0.75)
        assert (stats.accepted, stats.fatal) == (8, 2)

    def test_nothing_accepted(self):
        stats = summarize_trials([TrialResult(False, None)] * 5, param=None, seed=0)
        assert stats.accept_rate == 0.0
        assert stats.mean_fidelity is None
        assert (stats.fatal_lo, stats.fatal_hi) == (0.0, 1.0)


class TestExactMode:
    def test_two_photon_law(self):
        stats = run_experiment(
            bitflip(Protocol.OPTICAL_REJECT, 0.1, mode=RunMode.EXACT)
        )
        assert stats.accept_rate == pytest.approx(0.82, abs=1e-12)
        assert stats.fatal_rate == pytest.approx(0.01 / 0.82, abs=1e-12)
        assert stats.fatal_rate == pytest.approx(0.012195, abs=1e-6)
        assert stats.accept_lo == stats.accept_rate == stats.accept_hi

    def test_two_sided_law(self):
        stats = run_experiment(
            bitflip(Protocol.DUAL_DISTRIBUTION, 0.1, mode=RunMode.EXACT)
        )
        assert stats.accept_rate == pytest.approx(0.6724, abs=1e-12)

    def test_branch_weights_cover_every_outcome(self):
        config = bitflip(Protocol.REPETITION_CORRECT, 0.2, mode=RunMode.EXACT)
        total = math.fsum(weight for weight, _ in enumerate_outcomes(config))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_repetition_code_fails_only_on_two_or_more_flips(self):
        # Input |0>: a data error survives when two or three qubits flip.
        stats = run_experiment(
            bitflip(
                Protocol.REPETITION_CORRECT,
                0.1,
                mode=RunMode.EXACT,
                input_state=InputState(theta=0.0),
            )
        )
        assert stats.fatal_rate == pytest.approx(3 * 0.01 * 0.9 + 0.001, abs=1e-12)

    def test_single_flip_rejection(self):
        for label in (QubitLabel.PARTICLE3, QubitLabel.PARTICLE4):
            stats = run_experiment(
                exact(Protocol.OPTICAL_REJECT, channels={label: {"kind": "bit_flip", "p": 1.0}})
            )
            assert stats.accept_rate == 0.0
            assert stats.mean_fidelity is None

    def test_phase_flip_is_invisible(self):
        stats = run_experiment(
            exact(
                Protocol.END_TO_END,
                channels={QubitLabel.PARTICLE3: {"kind": "phase_flip", "pz": 1.0}},
                input_state=InputState(theta=math.pi / 2),
            )
        )
        assert stats.accept_rate == pytest.approx(1.0)
        assert stats.mean_fidelity == pytest.approx(0.0, abs=1e-12)

    def test_teleportation_is_perfect(self):
        stats = run_experiment(exact(Protocol.TELEPORT, input_state=InputState(theta=1.1, phi=2.0)))
        assert stats.accept_rate == pytest.approx(1.0)
        assert stats.mean_fidelity == pytest.approx(1.0, abs=1e-12)


class TestTrajectoryMode:
    def test_noiseless_optical_reject(self):
        stats = run_experiment(bitflip(Protocol.OPTICAL_REJECT, 0.0, trials=1000))
        assert stats.accept_rate == 1.0
        assert stats.mean_fidelity == pytest.approx(1.0)
        assert stats.fatal == 0

    def test_trials_are_reproducible(self):
        config = bitflip(Protocol.END_TO_END, 0.3, master_seed=11)
        assert run_trial(config, 17) == run_trial(config, 17)

    def test_worker_count_does_not_change_results(self):
        single = run_experiment(bitflip(Protocol.DUAL_DISTRIBUTION, 0.2, trials=600))
        pooled = run_experiment(
            bitflip(Protocol.DUAL_DISTRIBUTION, 0.2, trials=600, workers=4)
        )
        assert to_csv([single]) == to_csv([pooled])

    def test_chunks_match_single_trials(self):
        config = bitflip(Protocol.END_TO_END, 0.2, master_seed=5)
        start, results = _run_chunk(config, None, range(40, 60))
        assert start == 40
        assert results == [run_trial(config, i) for i in range(40, 60)]

    def test_chunks_cover_every_trial_once(self):
        chunks = _chunks(2500, 3)
        assert [i for chunk in chunks for i in chunk] == list(range(2500))
        assert max(len(chunk) for chunk in chunks) <= 1000

    def test_progress_counts_every_trial(self):
        seen = []
        run_experiment(bitflip(Protocol.OPTICAL_REJECT, 0.1, trials=2500, workers=3), progress=seen.append)
        assert sum(seen) == 2500

    @pytest.mark.slow
    def test_double_error_residual(self):
        trials = 100_000
        stats = run_experiment(bitflip(Protocol.OPTICAL_REJECT, 0.1, trials=trials, workers=4))
        assert abs(stats.accept_rate - 0.82) <= 3 * math.sqrt(0.82 * 0.18 / trials)
        fatal = 0.01 / 0.82
        assert abs(stats.fatal_rate - fatal) <= 3 * math.sqrt(fatal * (1 - fatal) / stats.accepted)
        assert stats.wall_time < 30

    @pytest.mark.slow
    def test_two_sided_acceptance(self):
        trials = 100_000
        stats = run_experiment(
            bitflip(Protocol.DUAL_DISTRIBUTION, 0.1, trials=trials, workers=4)
        )
        assert abs(stats.accept_rate - 0.6724) <= 3 * math.sqrt(0.6724 * 0.3276 / trials)
        assert stats.wall_time < 60


class TestSweep:
    def test_rotation_sweep(self):
        config = ExperimentConfig(
            protocol=Protocol.OPTICAL_REJECT,
            error_model=ErrorModelKind.ROTATION,
            targets=[QubitLabel.PARTICLE3],
            sweep=[0.0, math.pi / 6, math.pi / 4, math.pi / 3],
            mode=RunMode.EXACT,
        )
        rows = sweep(config)
        assert [row.accept_rate for row in rows] == pytest.approx([1, 0.75, 0.5, 0.25], abs=1e-12)
        assert all(row.mean_fidelity == pytest.approx(1.0, abs=1e-12) for row in rows)

    def test_rows_are_ordered_by_parameter(self):
        rows = sweep(bitflip(Protocol.OPTICAL_REJECT, 0.0, sweep=[0.1, 0.0, 0.05], mode=RunMode.EXACT))
        assert [row.param for row in rows] == [0.0, 0.05, 0.1]
        assert [row.accept_rate for row in rows] == pytest.approx([1.0, 0.905, 0.82], abs=1e-12)

    def test_empty_sweep(self):
        with pytest.raises(ConfigError):
            sweep(bitflip(Protocol.OPTICAL_REJECT, 0.0, sweep=[]))

    def test_missing_sweep(self):
        with pytest.raises(ConfigError):
            sweep(bitflip(Protocol.OPTICAL_REJECT, 0.1))

    def test_files_are_identical_across_worker_counts(self, tmp_path):
        contents = []
        for workers in (1, 8):
            path = tmp_path / f"sweep_{workers}.csv"
            sweep(
                bitflip(
                    Protocol.OPTICAL_REJECT,
                    0.0,
                    sweep=[0.0, 0.1],
                    trials=1500,
                    master_seed=99,
                    workers=workers,
                    output_path=str(path),
                )
            )
            contents.append(path.read_bytes())
        assert contents[0] == contents[1]


class TestExport:
    def test_csv_layout(self, tmp_path):
        path = tmp_path / "out" / "run.csv"
        run_experiment(
            bitflip(Protocol.OPTICAL_REJECT, 0.1, mode=RunMode.EXACT, output_path=str(path))
        )
        lines = path.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert lines[1].startswith("0.1,1000,0.82")
        assert len(lines) == 2

    def test_missing_values_are_empty(self):
        stats = run_experiment(
            exact(Protocol.OPTICAL_REJECT, channels={QubitLabel.PARTICLE3: {"kind": "bit_flip", "p": 1.0}})
        )
        row = to_csv([stats]).splitlines()[1].split(",")
        assert row[0] == ""
        assert row[CSV_FIELDS.index("mean_fidelity")] == ""

    def test_json_mirrors_csv_fields(self, tmp_path):
        path = tmp_path / "run.json"
        run_experiment(
            bitflip(
                Protocol.OPTICAL_REJECT,
                0.1,
                mode=RunMode.EXACT,
                output_path=str(path),
                output_format=OutputFormat.JSON,
            )
        )
        records = json.loads(path.read_text())
        assert list(records[0]) == list(CSV_FIELDS)
        assert json.loads(to_json([])) == []

    def test_unwritable_path(self, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        config = bitflip(
            Protocol.OPTICAL_REJECT,
            0.1,
            mode=RunMode.EXACT,
            output_path=str(blocker / "run.csv"),
        )
        with pytest.raises(OutputError):
            run_experiment(config)
