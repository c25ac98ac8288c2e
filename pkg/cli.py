"""
Command Line Interface for numerical radius geometry on polyhedral spaces.

Every verb prints one JSON document on stdout; a rich summary table goes to
stderr unless --json is given. Exit codes: 0 success, 1 internal
inconsistency, 2 input error.
"""

import json
import logging
import sys
from typing import Callable, List, NoReturn, Optional

import click
import typer
from pydantic import BaseModel, ValidationError
from rich.console import Console
from rich.table import Table

from wgeo.config import settings
from wgeo.errors import InconsistencyError, WgeoInputError
from wgeo.repositories import JsonInputRepository
from wgeo.schemas import ErrorDetail, ErrorResponse, response_payload
from wgeo.services import AnalysisService

# Initialize typer app and rich console
app = typer.Typer(help="Numerical radius geometry CLI", add_completion=False)
console = Console(stderr=True)
logger = logging.getLogger("wgeo.cli")

SPACE_HELP = "Space: l1:n, linf:n, poly:m or file:path.json"


def _configure(tol: Optional[float]) -> None:
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.WARNING),
        format='%(asctime)s - %(levelname)s - %(message)s',
    )
    if tol is not None:
        settings.attainment_rel_tol = tol


def _summary(title: str, payload: dict) -> Table:
    table = Table(title=title)
    table.add_column("Field", style="cyan")
    table.add_column("Value", style="magenta")
    for key, value in payload.items():
        if isinstance(value, list):
            value = f"{len(value)} item(s)"
        table.add_row(key, str(value))
    return table


def _fail(error: Exception, code: int) -> NoReturn:
    response = ErrorResponse(
        error=str(error),
        details=[ErrorDetail(type=type(error).__name__, message=str(error))],
    )
    typer.echo(json.dumps(response_payload(response)))
    console.print(f"[red]Error: {error}[/red]")
    raise typer.Exit(code)


def _run(title: str, json_only: bool, action: Callable[[], BaseModel]) -> None:
    try:
        response = action()
    except InconsistencyError as e:
        logger.error("Inconsistency: %s", e)
        _fail(e, 1)
    except (WgeoInputError, ValidationError) as e:
        logger.info("Input error: %s", e)
        _fail(e, 2)
    payload = response_payload(response)
    typer.echo(json.dumps(payload))
    if not json_only:
        console.print(_summary(title, payload))


def _service(exact: bool) -> AnalysisService:
    return AnalysisService(JsonInputRepository(), exact=exact)


@app.command()
def radius(
    space: str = typer.Option(..., "--space", help=SPACE_HELP),
    op: str = typer.Option(..., "--op", help="Operator JSON file"),
    exact: bool = typer.Option(False, "--exact", help="Rational arithmetic"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Relative attainment tolerance"),
    json_only: bool = typer.Option(False, "--json", help="Suppress the summary table"),
):
    """Numerical radius, operator norm and attaining pairs."""
    _configure(tol)
    _run("Numerical radius", json_only, lambda: _service(exact).radius(space, op))


@app.command("norm-check")
def norm_check(
    space: str = typer.Option(..., "--space", help=SPACE_HELP),
    exact: bool = typer.Option(False, "--exact", help="Rational arithmetic"),
    json_only: bool = typer.Option(False, "--json", help="Suppress the summary table"),
):
    """Whether the numerical radius is a norm on L(X)."""
    _configure(None)
    _run("Norm check", json_only, lambda: _service(exact).norm_check(space))


@app.command()
def pairs(
    space: str = typer.Option(..., "--space", help=SPACE_HELP),
    exact: bool = typer.Option(False, "--exact", help="Rational arithmetic"),
    json_only: bool = typer.Option(False, "--json", help="Suppress the summary table"),
):
    """List canonical duality pairs and which of them are extreme."""
    _configure(None)
    _run("Duality pairs", json_only, lambda: _service(exact).pairs(space))


@app.command()
def ortho(
    space: str = typer.Option(..., "--space", help=SPACE_HELP),
    op: str = typer.Option(..., "--op", help="Operator JSON file"),
    direction: Optional[str] = typer.Option(None, "--dir", help="Direction operator JSON file"),
    subspace: Optional[str] = typer.Option(None, "--subspace", help="Subspace basis JSON file"),
    exact: bool = typer.Option(False, "--exact", help="Rational arithmetic"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Relative attainment tolerance"),
    verify: bool = typer.Option(False, "--verify", help="Re-check the certificate independently"),
    json_only: bool = typer.Option(False, "--json", help="Suppress the summary table"),
):
    """Birkhoff-James orthogonality of T to a direction or a subspace."""
    _configure(tol)
    _run("Orthogonality", json_only,
         lambda: _service(exact).ortho(space, op, direction_path=direction, subspace_path=subspace, verify=verify))


@app.command()
def dist(
    space: str = typer.Option(..., "--space", help=SPACE_HELP),
    op: str = typer.Option(..., "--op", help="Operator JSON file"),
    subspace: str = typer.Option(..., "--subspace", help="Subspace basis JSON file"),
    exact: bool = typer.Option(False, "--exact", help="Rational arithmetic"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Relative attainment tolerance"),
    verify: bool = typer.Option(False, "--verify", help="Re-check certificate and minimizer independently"),
    json_only: bool = typer.Option(False, "--json", help="Suppress the summary table"),
):
    """Distance from T to a subspace, with dual certificate and best approximation."""
    _configure(tol)
    _run("Distance", json_only, lambda: _service(exact).dist(space, op, subspace, verify=verify))


@app.command()
def smooth(
    space: str = typer.Option(..., "--space", help=SPACE_HELP),
    op: str = typer.Option(..., "--op", help="Operator JSON file"),
    exact: bool = typer.Option(False, "--exact", help="Rational arithmetic"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Relative attainment tolerance"),
    json_only: bool = typer.Option(False, "--json", help="Suppress the summary table"),
):
    """Nu-smoothness of T with its witness pair."""
    _configure(tol)
    _run("Nu-smoothness", json_only, lambda: _service(exact).smooth(space, op))


@app.command()
def equiv(
    space: str = typer.Option(..., "--space", help=SPACE_HELP),
    op: str = typer.Option(..., "--op", help="Operator JSON file"),
    z: str = typer.Option(..., "--z", help="Vectors JSON file spanning Z"),
    exact: bool = typer.Option(False, "--exact", help="Rational arithmetic"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Relative attainment tolerance"),
    json_only: bool = typer.Option(False, "--json", help="Suppress the summary table"),
):
    """Compare T ⊥ L(X, Z) with x₀ ⊥ Z for the attaining vertex x₀."""
    _configure(tol)
    _run("Equivalence", json_only, lambda: _service(exact).equiv(space, op, z))


@app.command()
def index(
    space: str = typer.Option(..., "--space", help=SPACE_HELP),
    seed: int = typer.Option(..., "--seed", help="Random seed (required)"),
    samples: int = typer.Option(1000, "--samples", help="Number of random operators"),
    exact: bool = typer.Option(False, "--exact", help="Rational arithmetic"),
    json_only: bool = typer.Option(False, "--json", help="Suppress the summary table"),
):
    """Sampled upper bound on the numerical index of the space."""
    _configure(None)
    _run("Numerical index", json_only, lambda: _service(exact).index(space, samples, seed))


def run(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    try:
        result = app(args=argv, prog_name="wgeo", standalone_mode=False)
    except (click.exceptions.Exit, typer.Exit) as e:
        return e.exit_code
    except (click.Abort, typer.Abort):
        return 1
    except Exception as e:
        # usage errors from whichever click build typer runs on
        if not (callable(getattr(e, "show", None)) and isinstance(getattr(e, "exit_code", None), int)):
            raise
        e.show()
        return e.exit_code
    return result if isinstance(result, int) else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
