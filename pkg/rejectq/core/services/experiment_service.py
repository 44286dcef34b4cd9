"""
Service that runs experiments and self-checks with console progress and tables.
"""

from __future__ import annotations

import logging
from typing import List, Mapping, Optional, Sequence

import numpy as np
from rich.console import Console
from rich.panel import Panel
from rich.progress import (
    BarColumn,
    Progress,
    SpinnerColumn,
    TaskProgressColumn,
    TextColumn,
)
from rich.table import Table

from rejectq.core.channels.models import describe
from rejectq.core.config.settings import ExperimentConfig, RunMode
from rejectq.core.harness.runner import run_experiment, sweep
from rejectq.core.harness.stats import ExperimentStats
from rejectq.core.harness.verification import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    CheckResult,
    VerificationReport,
    verify,
)
from rejectq.core.utils.colors import Colors

logger = logging.getLogger("rejectq.service")


def _fmt(value: Optional[float], digits: int = 6) -> str:
    return "-" if value is None else f"{value:.{digits}f}"


class ExperimentService:
    """
    Console-facing wrapper around the harness.
    """

    def __init__(self, console: Optional[Console] = None):
        """Initialize the experiment service.

        Args:
            console: Optional console for output
        """
        self.console = console or Console()

    def _progress(self) -> Progress:
        return Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            TaskProgressColumn(),
            console=self.console,
            transient=True,
        )

    def show_config(self, config: ExperimentConfig) -> None:
        channels = ", ".join(
            f"{label}: {describe(model)}" for label, model in config.channel_models().items()
        )
        self.console.print(
            Panel(
                f"[{Colors.BOLD}]{config.protocol}[/] ({config.mode} mode)\n"
                f"[{Colors.DIM}]channels:[/] {channels or 'none'}\n"
                f"[{Colors.DIM}]trials:[/] {config.trials}   "
                f"[{Colors.DIM}]seed:[/] {config.master_seed}   "
                f"[{Colors.DIM}]workers:[/] {config.workers}",
                style=Colors.PANEL,
                expand=False,
            )
        )

    def run(
        self,
        config: ExperimentConfig,
        corrections: Optional[Mapping[int, np.ndarray]] = None,
    ) -> ExperimentStats:
        """Run one experiment and print its statistics.

        Args:
            config: Experiment to run
            corrections: Optional override of the teleportation corrections

        Returns:
            The aggregated statistics
        """
        self.show_config(config)
        with self._progress() as progress:
            task = progress.add_task(f"[cyan]Running {config.protocol}...", total=config.trials)
            stats = run_experiment(
                config,
                corrections=corrections,
                progress=lambda n: progress.update(task, advance=n),
            )
        self.console.print(self.stats_table([stats]))
        self._show_footer([stats], config)
        return stats

    def sweep(self, config: ExperimentConfig) -> List[ExperimentStats]:
        """Run every sweep point and print one row per parameter value."""
        self.show_config(config)
        points = len(config.sweep or [])
        with self._progress() as progress:
            task = progress.add_task(
                f"[cyan]Sweeping {config.error_model} over {points} values...",
                total=config.trials * points,
            )
            rows = sweep(config, progress=lambda n: progress.update(task, advance=n))
        self.console.print(self.stats_table(rows))
        self._show_footer(rows, config)
        return rows

    def verify(
        self,
        trials: int = DEFAULT_TRIALS,
        seed: int = DEFAULT_SEED,
        workers: int = 1,
        corrections: Optional[Mapping[int, np.ndarray]] = None,
    ) -> VerificationReport:
        """Run the self-check suite and print measured against expected values."""
        with self._progress() as progress:
            task = progress.add_task("[cyan]Running checks...", total=10)

            def advance(result: CheckResult) -> None:
                progress.update(task, advance=1, description=f"[cyan]{result.name}")

            report = verify(
                trials=trials,
                seed=seed,
                workers=workers,
                corrections=corrections,
                on_check=advance,
            )
        self.console.print(self.report_table(report.checks))
        if report.passed:
            self.console.print(f"[{Colors.PASSED}]✓ All checks passed[/]")
        else:
            names = ", ".join(check.name for check in report.failures())
            self.console.print(f"[{Colors.FAILED}]✗ Failed:[/] {names}")
        return report

    @staticmethod
    def stats_table(rows: Sequence[ExperimentStats]) -> Table:
        table = Table(show_header=True, header_style=Colors.BOLD)
        table.add_column("param", style=Colors.PARAM, justify="right")
        table.add_column("accept", justify="right")
        table.add_column("95% CI", justify="right", style=Colors.DIM)
        table.add_column("fidelity", justify="right")
        table.add_column("fatal", justify="right")
        table.add_column("95% CI", justify="right", style=Colors.DIM)
        table.add_column("time (s)", justify="right", style=Colors.DIM)
        for stats in rows:
            table.add_row(
                "-" if stats.param is None else f"{stats.param:g}",
                Colors.rate(stats.accept_rate),
                f"[{_fmt(stats.accept_lo, 4)}, {_fmt(stats.accept_hi, 4)}]",
                _fmt(stats.mean_fidelity),
                _fmt(stats.fatal_rate),
                f"[{_fmt(stats.fatal_lo, 4)}, {_fmt(stats.fatal_hi, 4)}]",
                f"{stats.wall_time:.2f}",
            )
        return table

    @staticmethod
    def report_table(checks: Sequence[CheckResult]) -> Table:
        table = Table(show_header=True, header_style=Colors.BOLD)
        table.add_column("check", style=Colors.PARAM)
        table.add_column("result")
        table.add_column("measured")
        table.add_column("expected", style=Colors.DIM)
        table.add_column("time (s)", justify="right", style=Colors.DIM)
        for check in checks:
            table.add_row(
                check.name,
                Colors.verdict(check.passed),
                check.measured,
                check.expected,
                f"{check.runtime:.2f}",
            )
        return table

    def _show_footer(self, rows: Sequence[ExperimentStats], config: ExperimentConfig) -> None:
        if config.mode is RunMode.TRAJECTORY:
            accepted = sum(stats.accepted or 0 for stats in rows)
            self.console.print(
                f"[{Colors.DIM}]{accepted} accepted of {config.trials * len(rows)} trials[/]"
            )
        if config.output_path:
            self.console.print(
                f"Results saved to [{Colors.BOLD}]{config.output_path}[/] "
                f"({config.output_format})"
            )
