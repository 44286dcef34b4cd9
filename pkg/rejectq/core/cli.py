"""
Command-line interface for running, sweeping and verifying protocols.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional

import typer
from pydantic import ValidationError
from rich.console import Console

from rejectq.core.config.settings import (
    ConfigManager,
    ErrorModelKind,
    ExperimentConfig,
    OutputFormat,
    Protocol,
    RunMode,
)
from rejectq.core.errors import ChannelError, ConfigError, OutputError
from rejectq.core.harness.verification import DEFAULT_SEED, DEFAULT_TRIALS
from rejectq.core.services.experiment_service import ExperimentService
from rejectq.core.utils.colors import Colors
from rejectq.core.utils.log import configure_logging

EXIT_VERIFY_FAILED = 1
EXIT_CONFIG_ERROR = 2

# Initialize typer app
app = typer.Typer(
    name="rejectq",
    help="Simulate and verify CNOT-free optical error rejection for quantum communication",
    add_completion=False,
)

# Initialize rich console
console = Console()


def _split(values: Optional[str]) -> Optional[List[str]]:
    if values is None:
        return None
    return [item.strip() for item in values.split(",") if item.strip()]


def parse_sweep(values: Optional[str]) -> Optional[List[float]]:
    """Parse ``"0,0.05,0.1"`` into floats; an empty string gives an empty list."""
    items = _split(values)
    if items is None:
        return None
    try:
        return [float(item) for item in items]
    except ValueError as e:
        raise ConfigError(f"Invalid sweep value list {values!r}: {e}") from e


def build_config(
    config_path: Optional[str] = None,
    protocol: Optional[Protocol] = None,
    error_model: Optional[ErrorModelKind] = None,
    p: Optional[float] = None,
    theta: Optional[float] = None,
    targets: Optional[str] = None,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    out: Optional[str] = None,
    output_format: Optional[OutputFormat] = None,
    workers: Optional[int] = None,
    mode: Optional[RunMode] = None,
    input_theta: Optional[float] = None,
    input_phi: Optional[float] = None,
    sweep_values: Optional[str] = None,
) -> ExperimentConfig:
    """Merge the configuration file with command-line overrides."""
    overrides: Dict[str, Any] = {
        "protocol": protocol,
        "error_model": error_model,
        "p": p,
        "theta": theta,
        "targets": _split(targets),
        "trials": trials,
        "master_seed": seed,
        "output_path": out,
        "output_format": output_format,
        "workers": workers,
        "mode": mode,
        "sweep": parse_sweep(sweep_values),
    }
    if input_theta is not None:
        overrides["input_state"] = {"theta": input_theta, "phi": input_phi or 0.0}
    elif input_phi is not None:
        raise ConfigError("--input-phi needs --input-theta")
    return ConfigManager(config_path).load(**overrides)


def _fail(message: str, code: int = EXIT_CONFIG_ERROR) -> None:
    console.print(f"[{Colors.FAILED}]Error:[/] {message}")
    raise typer.Exit(code=code)


ConfigOption = typer.Option(None, "--config", "-c", help="Path to the configuration file")
ProtocolOption = typer.Option(None, "--protocol", help="Protocol to run")
ErrorModelOption = typer.Option(
    None, "--error-model", help="Error model applied to the targeted channel positions"
)
POption = typer.Option(None, "--p", help="Flip probability for bitflip/phaseflip")
ThetaOption = typer.Option(None, "--theta", help="Rotation angle in radians")
TargetsOption = typer.Option(
    None, "--targets", help="Comma-separated channel positions (default: all)"
)
TrialsOption = typer.Option(None, "--trials", help="Trials per parameter value")
SeedOption = typer.Option(None, "--seed", help="64-bit master seed")
OutOption = typer.Option(None, "--out", help="Result file")
FormatOption = typer.Option(None, "--format", help="Result file format")
WorkersOption = typer.Option(None, "--workers", help="Worker processes")
ModeOption = typer.Option(None, "--mode", help="trajectory (Monte Carlo) or exact")
InputThetaOption = typer.Option(
    None, "--input-theta", help="Polar angle of a fixed input qubit (default: random)"
)
InputPhiOption = typer.Option(None, "--input-phi", help="Azimuth of the fixed input qubit")
LogLevelOption = typer.Option("WARNING", "--log-level", help="Logging level")


@app.command()
def run(
    config_path: Optional[str] = ConfigOption,
    protocol: Optional[Protocol] = ProtocolOption,
    error_model: Optional[ErrorModelKind] = ErrorModelOption,
    p: Optional[float] = POption,
    theta: Optional[float] = ThetaOption,
    targets: Optional[str] = TargetsOption,
    trials: Optional[int] = TrialsOption,
    seed: Optional[int] = SeedOption,
    out: Optional[str] = OutOption,
    output_format: Optional[OutputFormat] = FormatOption,
    workers: Optional[int] = WorkersOption,
    mode: Optional[RunMode] = ModeOption,
    input_theta: Optional[float] = InputThetaOption,
    input_phi: Optional[float] = InputPhiOption,
    log_level: str = LogLevelOption,
) -> None:
    """Run one experiment and print acceptance, fidelity and fatal rate."""
    try:
        configure_logging(log_level)
        config = build_config(
            config_path,
            protocol,
            error_model,
            p,
            theta,
            targets,
            trials,
            seed,
            out,
            output_format,
            workers,
            mode,
            input_theta,
            input_phi,
        )
        ExperimentService(console).run(config)
    except (ConfigError, ChannelError, OutputError, ValidationError, ValueError) as e:
        _fail(str(e))


@app.command()
def sweep(
    sweep_values: Optional[str] = typer.Option(
        None, "--sweep", help="Comma-separated values substituted for p or theta"
    ),
    config_path: Optional[str] = ConfigOption,
    protocol: Optional[Protocol] = ProtocolOption,
    error_model: Optional[ErrorModelKind] = ErrorModelOption,
    targets: Optional[str] = TargetsOption,
    trials: Optional[int] = TrialsOption,
    seed: Optional[int] = SeedOption,
    out: Optional[str] = OutOption,
    output_format: Optional[OutputFormat] = FormatOption,
    workers: Optional[int] = WorkersOption,
    mode: Optional[RunMode] = ModeOption,
    input_theta: Optional[float] = InputThetaOption,
    input_phi: Optional[float] = InputPhiOption,
    log_level: str = LogLevelOption,
) -> None:
    """Run one experiment per parameter value, one result row each."""
    try:
        configure_logging(log_level)
        config = build_config(
            config_path,
            protocol,
            error_model,
            None,
            None,
            targets,
            trials,
            seed,
            out,
            output_format,
            workers,
            mode,
            input_theta,
            input_phi,
            sweep_values,
        )
        if not config.sweep:
            raise ConfigError("Nothing to sweep: pass --sweep or set 'sweep' in the config")
        ExperimentService(console).sweep(config)
    except (ConfigError, ChannelError, OutputError, ValidationError, ValueError) as e:
        _fail(str(e))


@app.command()
def verify(
    trials: int = typer.Option(
        DEFAULT_TRIALS, "--trials", min=1, help="Trials for the Monte Carlo checks"
    ),
    seed: int = typer.Option(DEFAULT_SEED, "--seed", help="Master seed"),
    workers: int = typer.Option(1, "--workers", min=1, help="Worker processes"),
    log_level: str = LogLevelOption,
) -> None:
    """Run the self-check suite; exits with status 1 if any check fails."""
    try:
        configure_logging(log_level)
    except ValueError as e:
        _fail(str(e))
    report = ExperimentService(console).verify(trials=trials, seed=seed, workers=workers)
    if not report.passed:
        raise typer.Exit(code=EXIT_VERIFY_FAILED)


if __name__ == "__main__":
    app()
