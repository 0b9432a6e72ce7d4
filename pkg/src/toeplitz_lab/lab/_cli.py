"""Command line interface of the verification lab."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import TYPE_CHECKING
from typing import cast

import click
import typer
from rich.console import Console
from textual.logging import TextualHandler

from toeplitz_lab.__about__ import __version__
from toeplitz_lab._exceptions import LabError
from toeplitz_lab.constants import ACCEPTANCE_TOL
from toeplitz_lab.constants import DEFAULT_BLOCKS
from toeplitz_lab.constants import DEFAULT_GUARD
from toeplitz_lab.constants import DEFAULT_TAYLOR_DEGREE

from ._generators import generate
from ._report import summarize
from ._report import summary_lines
from ._report import summary_table
from ._runner import Ledger
from ._runner import exit_status
from ._runner import run
from ._runner import suite
from ._scenario import THEOREMS
from ._scenario import Parameters
from ._scenario import Scenario
from ._viewer import LedgerViewer

if TYPE_CHECKING:
    from collections.abc import Sequence

    from ._runner import Record
    from ._scenario import TheoremId

INVALID_INPUT = 2

app = typer.Typer(
    help="Generate, replay and summarize Toeplitz structure scenarios.",
    no_args_is_help=True,
    add_completion=False,
)
console = Console()

TheoremOption = typer.Option(
    ...,
    "--theorem",
    "-t",
    click_type=click.Choice(THEOREMS),
    help="Theorem the scenarios are built for.",
)
LedgerOption = typer.Option(
    None, "--ledger", help="JSON lines file receiving one record per run."
)


def _install_logging(verbose: int) -> None:
    logger = logging.getLogger("toeplitz_lab")
    if not any(isinstance(h, TextualHandler) for h in logger.handlers):
        logger.addHandler(TextualHandler())
    logger.setLevel(max(logging.WARNING - 10 * verbose, logging.DEBUG))


def _fail(err: LabError) -> typer.Exit:
    typer.echo(f"Error: {err}", err=True)
    return typer.Exit(INVALID_INPUT)


def _report_records(records: Sequence[Record], *, as_json: bool) -> None:
    summaries = summarize(records)
    if as_json:
        for line in summary_lines(summaries):
            typer.echo(line)
    else:
        console.print(summary_table(summaries))
    for record in records:
        if record.status == "fail":
            typer.echo(f"FAIL {record.scenario_id} seed={record.seed}")


def _version(value: bool) -> None:
    if value:
        typer.echo(__version__)
        raise typer.Exit


@app.callback()
def configure(
    verbose: int = typer.Option(
        0, "--verbose", "-v", count=True, help="Raise the log level."
    ),
    version: bool = typer.Option(
        False,
        "--version",
        callback=_version,
        is_eager=True,
        help="Show the version and exit.",
    ),
) -> None:
    """Finite-truncation verification lab."""
    _install_logging(verbose)


@app.command("gen")
def gen_command(
    seed: int = typer.Option(..., "--seed", "-s", min=0),
    theorem: str = TheoremOption,
    out: Path = typer.Option(..., "--out", "-o", dir_okay=False),
    l: int = typer.Option(1, "--l", help="Degree of B."),  # noqa: E741
    lp: int = typer.Option(1, "--lp", help="Degree of B′."),
    m: int = typer.Option(1, "--m", help="Fiber dimension."),
    k: int = typer.Option(1, "--k", help="Perturbation rank or defect."),
    blocks: int = typer.Option(DEFAULT_BLOCKS, "--blocks"),
    taylor_degree: int = typer.Option(
        DEFAULT_TAYLOR_DEGREE, "--taylor-degree"
    ),
    guard: int = typer.Option(DEFAULT_GUARD, "--guard"),
    tol: float = typer.Option(ACCEPTANCE_TOL, "--tol"),
    origin_only: bool = typer.Option(
        False, "--origin-only", help="Put every zero of B at the origin."
    ),
    orthogonal: bool = typer.Option(
        False, "--orthogonal", help="Draw the Us orthogonal to M."
    ),
) -> None:
    """Generate a scenario file."""
    params = Parameters(
        l, lp, m, k, blocks, taylor_degree, guard, tol, origin_only, orthogonal
    )
    try:
        scenario = generate(seed, cast("TheoremId", theorem), params)
    except LabError as err:
        raise _fail(err) from err
    scenario.save(out)
    typer.echo(f"Wrote {scenario.scenario_id} to {out}.")


@app.command("run")
def run_command(
    source: Path = typer.Option(..., "--in", "-i", dir_okay=False),
    tol: float | None = typer.Option(None, "--tol"),
    ledger: Path | None = LedgerOption,
) -> None:
    """Replay a scenario file and print its record."""
    try:
        record = run(Scenario.load(source), tol)
    except LabError as err:
        raise _fail(err) from err
    if ledger is not None:
        Ledger(ledger).append(record)
    typer.echo(json.dumps(record.to_json(), sort_keys=True))
    raise typer.Exit(exit_status([record]))


@app.command("suite")
def suite_command(
    theorem: str = TheoremOption,
    trials: int = typer.Option(..., "--trials", "-n", min=1),
    seed: int = typer.Option(0, "--seed", "-s", min=0),
    l: int = typer.Option(1, "--l"),  # noqa: E741
    lp: int = typer.Option(1, "--lp"),
    m: int = typer.Option(1, "--m"),
    k: int = typer.Option(1, "--k"),
    blocks: int = typer.Option(DEFAULT_BLOCKS, "--blocks"),
    taylor_degree: int = typer.Option(
        DEFAULT_TAYLOR_DEGREE, "--taylor-degree"
    ),
    guard: int = typer.Option(DEFAULT_GUARD, "--guard"),
    tol: float = typer.Option(ACCEPTANCE_TOL, "--tol"),
    origin_only: bool = typer.Option(False, "--origin-only"),
    orthogonal: bool = typer.Option(False, "--orthogonal"),
    workers: int = typer.Option(1, "--workers", "-w", min=1),
    ledger: Path | None = LedgerOption,
    as_json: bool = typer.Option(False, "--json"),
) -> None:
    """Generate and run a batch of consecutive seeds."""
    params = Parameters(
        l, lp, m, k, blocks, taylor_degree, guard, tol, origin_only, orthogonal
    )
    try:
        records = suite(
            cast("TheoremId", theorem),
            trials,
            seed,
            params,
            tol=tol,
            workers=workers,
            ledger=Ledger(ledger) if ledger else None,
        )
    except LabError as err:
        raise _fail(err) from err
    _report_records(records, as_json=as_json)
    raise typer.Exit(exit_status(records))


@app.command("report")
def report_command(
    ledger: Path = typer.Option(..., "--ledger"),
    as_json: bool = typer.Option(False, "--json", help="Emit JSON lines."),
) -> None:
    """Summarize a ledger."""
    try:
        records = Ledger(ledger).records()
    except LabError as err:
        raise _fail(err) from err
    _report_records(records, as_json=as_json)
    raise typer.Exit(exit_status(records))


@app.command("view")
def view_command(ledger: Path = typer.Option(..., "--ledger")) -> None:
    """Browse a ledger in the terminal."""
    try:
        records = Ledger(ledger).records()
    except LabError as err:
        raise _fail(err) from err
    LedgerViewer(records, title=str(ledger)).run()


def main() -> None:
    """Entry point of the `toeplitz-lab` script."""
    app()


if __name__ == "__main__":
    main()
