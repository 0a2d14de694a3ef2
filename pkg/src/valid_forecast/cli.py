"""
Command-line interface for valid-forecast.

Reports go to stdout (or --out); logs and diagnostics go to stderr.
"""
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import typer
from rich.console import Console
from rich.logging import RichHandler

from .core.config import settings
from .core.exceptions import (
    DomainError,
    EnumerationSizeError,
    InputError,
    ReportGenerationError,
    ValidForecastError,
)
from .core.models import CurveKind
from .forecaster import PollForecaster, load_joint_model, load_poll
from .prediction.validity import default_alpha_grid
from .reporting.emitters import curve_frame, export_schemas, to_json, to_tsv, write_output


console = Console(stderr=True)

# Set up logging
logging.basicConfig(
    level=settings.log_level.upper(),
    format="%(message)s",
    datefmt="[%X]",
    handlers=[RichHandler(console=console, rich_tracebacks=True)],
)

logger = logging.getLogger("valid_forecast")

# Create Typer app
app = typer.Typer(help="Valid prediction sets and plausibilities for poll-based election forecasts")

EXIT_INPUT_ERROR = 2
EXIT_DOMAIN_ERROR = 3
EXIT_ENUMERATION_ERROR = 4


def _exit_code(error: ValidForecastError) -> int:
    if isinstance(error, EnumerationSizeError):
        return EXIT_ENUMERATION_ERROR
    if isinstance(error, DomainError):
        return EXIT_DOMAIN_ERROR
    if isinstance(error, (InputError, ReportGenerationError)):
        return EXIT_INPUT_ERROR
    return 1


def _fail(error: Exception, code: int) -> None:
    console.print(f"[bold red]Error:[/bold red] {str(error)}")
    raise typer.Exit(code=code)


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        typer.echo(text, nl=not text.endswith("\n"))
    else:
        write_output(text, out)
        console.print(f"[bold]Report written:[/bold] {out}")


def _parse_alpha_grid(grid: Optional[str]) -> Optional[Tuple[float, ...]]:
    """'low:high:points' -> equally spaced grid."""
    if grid is None:
        return None
    parts = grid.split(":")
    if len(parts) != 3:
        raise InputError(f"alpha grid must look like LOW:HIGH:POINTS, got {grid!r}")
    try:
        low, high, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InputError(f"alpha grid must look like LOW:HIGH:POINTS, got {grid!r}")
    return default_alpha_grid(points, low, high)


def _parse_forecasts(items: List[str]) -> Dict[str, float]:
    forecasts = {}
    for item in items:
        name, sep, value = item.rpartition("=")
        if not sep or not name:
            raise InputError(f"forecast must look like NAME=PROB, got {item!r}")
        try:
            forecasts[name] = float(value)
        except ValueError:
            raise InputError(f"forecast probability for {name!r} is not a number: {value!r}")
    return forecasts


@app.command()
def predict(
    poll: Path = typer.Option(..., "--poll", help="Poll JSON file"),
    lam: float = typer.Option(settings.default_lambda, "--lambda", help="Logistic sharpness"),
    alpha: float = typer.Option(settings.default_alpha, help="Prediction-set level"),
    target: str = typer.Option(settings.target_label, help="Candidate the logistic rule models"),
    theta_digits: Optional[int] = typer.Option(settings.theta_digits, help="Round theta_hat to this many decimals"),
    exact_theta: bool = typer.Option(
        False, "--exact-theta", help="Evaluate the naive estimate at the unrounded theta_hat"
    ),
    out: Optional[Path] = typer.Option(None, help="Write the report here instead of stdout"),
):
    """
    Prediction set for a poll, ignoring nonresponse.
    """
    try:
        forecaster = PollForecaster(
            lam=lam, alpha=alpha, target=target, theta_digits=theta_digits, exact_theta=exact_theta
        )
        report = forecaster.predict(load_poll(poll))
        if report.empty_set:
            console.print("[bold yellow]Warning:[/bold yellow] the prediction set is empty")
        elif report.too_close_to_call:
            console.print("[bold]Too close to call:[/bold] the prediction set has more than one candidate")
        _emit(to_json(report), out)
    except ValidForecastError as e:
        _fail(e, _exit_code(e))
    except typer.Exit:
        raise
    except Exception as e:
        logger.exception("Unexpected error")
        _fail(e, 1)


@app.command()
def plaus(
    poll: Path = typer.Option(..., "--poll", help="Poll JSON file"),
    lam: float = typer.Option(settings.default_lambda, "--lambda", help="Logistic sharpness"),
    alpha: float = typer.Option(settings.default_alpha, help="Prediction-set level"),
    grid_size: int = typer.Option(settings.default_grid_size, help="Number of imputation fractions on [0, 1]"),
    target: str = typer.Option(settings.target_label, help="Candidate the logistic rule models"),
    theta_digits: Optional[int] = typer.Option(settings.theta_digits, help="Round theta_hat to this many decimals"),
    exact_theta: bool = typer.Option(
        False, "--exact-theta", help="Evaluate the naive estimate at the unrounded theta_hat"
    ),
    check_validity: bool = typer.Option(False, "--check-validity", help="Verify the plausibility set under every member"),
    out: Optional[Path] = typer.Option(None, help="Write the report here instead of stdout"),
):
    """
    Upper/lower probabilities over the nonresponse ensemble.
    """
    try:
        forecaster = PollForecaster(
            lam=lam,
            alpha=alpha,
            grid_size=grid_size,
            target=target,
            theta_digits=theta_digits,
            exact_theta=exact_theta,
        )
        report = forecaster.plausibility(load_poll(poll), check_validity=check_validity)
        if not report.prediction_set:
            console.print("[bold yellow]Warning:[/bold yellow] the plausibility prediction set is empty")
        if report.ensemble_validity is not None and not report.ensemble_validity.hypothesis_holds:
            console.print("[bold yellow]Warning:[/bold yellow] some members fail the validity hypothesis")
        _emit(to_json(report), out)
    except ValidForecastError as e:
        _fail(e, _exit_code(e))
    except typer.Exit:
        raise
    except Exception as e:
        logger.exception("Unexpected error")
        _fail(e, 1)


@app.command()
def curve(
    kind: CurveKind = typer.Argument(..., help="logistic or miscoverage"),
    n: int = typer.Option(1000, help="Poll size (miscoverage curve)"),
    lam: float = typer.Option(settings.default_lambda, "--lambda", help="Logistic sharpness"),
    points: int = typer.Option(settings.curve_points, help="Grid points (logistic curve)"),
    uninformative: bool = typer.Option(False, "--uninformative", help="Use the uninformative poll model"),
    out: Optional[Path] = typer.Option(None, help="Write the TSV here instead of stdout"),
):
    """
    Plot data as two-column TSV: the logistic rule or the miscoverage distribution G.
    """
    try:
        forecaster = PollForecaster(lam=lam)
        if kind is CurveKind.LOGISTIC:
            frame = forecaster.logistic_curve(points)
        else:
            frame = curve_frame(forecaster.miscoverage_curve(n, uninformative))
        _emit(to_tsv(frame), out)
    except ValidForecastError as e:
        _fail(e, _exit_code(e))
    except typer.Exit:
        raise
    except Exception as e:
        logger.exception("Unexpected error")
        _fail(e, 1)


@app.command()
def validity(
    n: int = typer.Option(1000, help="Poll size of the binomial/flat model"),
    lam: float = typer.Option(settings.default_lambda, "--lambda", help="Logistic sharpness"),
    alpha_grid: Optional[str] = typer.Option(None, help="LOW:HIGH:POINTS (default from settings)"),
    uninformative: bool = typer.Option(False, "--uninformative", help="Use the uninformative poll model"),
    model: Optional[Path] = typer.Option(None, "--model", help="Conditional-table JSON to check instead"),
    out: Optional[Path] = typer.Option(None, help="Write the report here instead of stdout"),
):
    """
    Exact validity report on a grid of alpha levels.
    """
    try:
        forecaster = PollForecaster(lam=lam)
        joint = load_joint_model(model) if model is not None else None
        report = forecaster.validity(n, _parse_alpha_grid(alpha_grid), uninformative, joint)
        if not report.all_hold:
            failures = sum(1 for ok in report.holds if not ok)
            console.print(f"[bold yellow]Validity fails at {failures} grid points[/bold yellow]")
        _emit(to_json(report), out)
    except ValidForecastError as e:
        _fail(e, _exit_code(e))
    except typer.Exit:
        raise
    except Exception as e:
        logger.exception("Unexpected error")
        _fail(e, 1)


@app.command()
def simulate(
    n: int = typer.Option(1000, help="Poll size of the binomial/flat model"),
    lam: float = typer.Option(settings.default_lambda, "--lambda", help="Logistic sharpness"),
    alpha: float = typer.Option(settings.default_alpha, help="Prediction-set level"),
    trials: int = typer.Option(settings.monte_carlo_trials, help="Number of simulated (X, Y) draws"),
    seed: int = typer.Option(settings.default_seed, help="Random seed"),
    out: Optional[Path] = typer.Option(None, help="Write the report here instead of stdout"),
):
    """
    Monte Carlo miscoverage next to the exact value.
    """
    try:
        forecaster = PollForecaster(lam=lam, alpha=alpha)
        _emit(to_json(forecaster.simulate(n, trials, seed)), out)
    except ValidForecastError as e:
        _fail(e, _exit_code(e))
    except typer.Exit:
        raise
    except Exception as e:
        logger.exception("Unexpected error")
        _fail(e, 1)


@app.command()
def outlets(
    alpha: float = typer.Option(settings.default_alpha, help="Prediction-set level"),
    forecast: Optional[List[str]] = typer.Option(
        None, help="NAME=PROB chance for C; repeatable (default: the 2016 outlets)"
    ),
    out: Optional[Path] = typer.Option(None, help="Write the report here instead of stdout"),
):
    """
    Prediction sets for published binary forecasts.
    """
    try:
        forecaster = PollForecaster(alpha=alpha)
        forecasts = _parse_forecasts(forecast) if forecast else None
        _emit(to_json(forecaster.outlets(forecasts)), out)
    except ValidForecastError as e:
        _fail(e, _exit_code(e))
    except typer.Exit:
        raise
    except Exception as e:
        logger.exception("Unexpected error")
        _fail(e, 1)


@app.command()
def schemas(
    out: Path = typer.Option(Path("schemas"), help="Directory for the JSON schema files"),
):
    """
    Export JSON schemas for every report.
    """
    try:
        for path in export_schemas(out):
            console.print(f"[bold]Schema written:[/bold] {path}")
    except ValidForecastError as e:
        _fail(e, _exit_code(e))


def main():
    """
    Main entry point for the CLI.
    """
    app()
