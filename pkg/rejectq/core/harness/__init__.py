"""Monte Carlo and exact experiment runner, result files and the self-check suite."""

from rejectq.core.harness.export import CSV_FIELDS, to_csv, to_json, write_results
from rejectq.core.harness.runner import (
    enumerate_outcomes,
    run_experiment,
    run_protocol,
    run_trial,
    sweep,
)
from rejectq.core.harness.stats import (
    FATAL_FIDELITY,
    ExperimentStats,
    TrialResult,
    summarize_exact,
    summarize_trials,
    wilson_interval,
)
from rejectq.core.harness.verification import CheckResult, VerificationReport, verify

__all__ = [
    "CSV_FIELDS",
    "FATAL_FIDELITY",
    "CheckResult",
    "ExperimentStats",
    "TrialResult",
    "VerificationReport",
    "enumerate_outcomes",
    "run_experiment",
    "run_protocol",
    "run_trial",
    "summarize_exact",
    "summarize_trials",
    "sweep",
    "to_csv",
    "to_json",
    "verify",
    "wilson_interval",
    "write_results",
]
