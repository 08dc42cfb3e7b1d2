import logging
import sys
from pathlib import Path
from typing import Callable, Optional

import typer

from commands.gen import cmd_gen
from commands.lattice import cmd_lattice
from commands.verify import cmd_verify
from config.settings import (
    COMPOSITION_DEPTH,
    DEFAULT_FIELD,
    ENUMERATION_BUDGET,
    LOG_FILE,
    LOG_LEVEL,
    NODE_BUDGET,
    SEED,
    VERIFY_SAMPLES,
    WORKERS,
    validate_settings,
)
from utils.constants import EXIT_CHECKS_FAILED, EXIT_OK, EXIT_VALIDATION_ERROR
from utils.exceptions import WexError
from utils.helpers import atomic_write_text, to_json

logger = logging.getLogger("wexlattice.cli")

app = typer.Typer(
    name="wexlattice",
    help="Weakly exact and exact structures of finite type-A style categories over F_p.",
    no_args_is_help=True,
    add_completion=False,
)


def setup_logging():
    """Configure logging once; reports go to stdout, so logs use stderr"""
    root = logging.getLogger()
    if root.handlers:
        return

    handlers = [logging.StreamHandler(sys.stderr)]
    if LOG_FILE:
        handlers.append(logging.FileHandler(LOG_FILE, encoding="utf-8"))

    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
    )


@app.callback()
def main():
    setup_logging()
    try:
        validate_settings()
    except ValueError as e:
        logger.critical(f"❌ Configuration validation failed: {e}")
        raise typer.Exit(EXIT_VALIDATION_ERROR)


def _run(command: Callable, **kwargs):
    """Call a command or file write, mapping package errors (OutputError included) to exit codes"""
    try:
        return command(**kwargs)
    except WexError as e:
        logger.error(f"❌ {type(e).__name__}: {e}", extra={"witness": e.witness})
        typer.echo(f"Error: {e}", err=True)
        if e.witness:
            typer.echo(to_json(e.witness), err=True, nl=False)
        raise typer.Exit(e.exit_code)


@app.command("gen")
def gen(
    type_a: int = typer.Option(..., "--type-a", min=1, help="Number of vertices n of A_n."),
    orientation: str = typer.Option("", "--orientation", help="'R' (k -> k+1) or 'L' per arrow; default all 'R'."),
    field: int = typer.Option(DEFAULT_FIELD, "--field", help="Prime p of the field F_p."),
    out: Path = typer.Option(..., "--out", help="Category file to write."),
):
    """Generate the interval category of a type-A quiver."""
    category = _run(cmd_gen, n=type_a, orientation=orientation, prime=field, out_path=out)
    typer.echo(f"Wrote {len(category.indecs)} indecomposables to {out}", err=True)


@app.command("lattice")
def lattice(
    input_path: Path = typer.Argument(..., help="Category file."),
    out_json: Optional[Path] = typer.Option(None, "--out-json", help="Report path; stdout if omitted."),
    out_dot: Optional[Path] = typer.Option(None, "--out-dot", help="DOT path for the Hasse diagram."),
    closed_only: bool = typer.Option(False, "--closed-only", help="DOT shows only the closed sublattice."),
    field: Optional[int] = typer.Option(None, "--field", help="Read the category over another prime."),
    budget: int = typer.Option(ENUMERATION_BUDGET, "--budget", min=1, help="Bound on p^dim B for the general sweep."),
    node_budget: int = typer.Option(NODE_BUDGET, "--node-budget", min=1, help="Node bound of the coordinate sweep."),
    workers: int = typer.Option(WORKERS, "--workers", min=1, help="Threads for per-node work."),
    composition_depth: int = typer.Option(COMPOSITION_DEPTH, "--composition-depth", min=1, max=2),
    oracles: Optional[bool] = typer.Option(None, "--oracles/--no-oracles", help="Run per-node oracles."),
):
    """Enumerate sub-bimodules, decide closedness and check the lattice laws."""
    run = _run(
        cmd_lattice,
        input_path=input_path,
        out_json=out_json,
        out_dot=out_dot,
        closed_only=closed_only,
        prime=field,
        budget=budget,
        node_budget=node_budget,
        workers=workers,
        composition_depth=composition_depth,
        oracles=oracles,
    )
    if not run.passed:
        logger.warning("❌ Some lattice checks failed; see the report")
        raise typer.Exit(EXIT_CHECKS_FAILED)
    logger.info("✅ All lattice checks passed")
    raise typer.Exit(EXIT_OK)


@app.command("verify")
def verify(
    input_path: Path = typer.Argument(..., help="Category file."),
    checks: Optional[str] = typer.Option(None, "--checks", help="Comma-separated checks, or 'all'."),
    seed: int = typer.Option(SEED, "--seed", min=0),
    field: Optional[int] = typer.Option(None, "--field", help="Read the category over another prime."),
    samples: int = typer.Option(VERIFY_SAMPLES, "--samples", min=1),
    composition_depth: int = typer.Option(COMPOSITION_DEPTH, "--composition-depth", min=1, max=2),
    budget: int = typer.Option(ENUMERATION_BUDGET, "--budget", min=1),
    node_budget: int = typer.Option(NODE_BUDGET, "--node-budget", min=1),
    workers: int = typer.Option(WORKERS, "--workers", min=1),
    out: Optional[Path] = typer.Option(None, "--out", help="Verify report path; stdout if omitted."),
):
    """Run named property suites and report pass/fail with witnesses."""
    report = _run(
        cmd_verify,
        input_path=input_path,
        checks=checks,
        seed=seed,
        prime=field,
        samples=samples,
        composition_depth=composition_depth,
        budget=budget,
        node_budget=node_budget,
        workers=workers,
    )
    text = to_json(report)
    if out:
        _run(atomic_write_text, path=out, text=text, validate_json=True)
    else:
        sys.stdout.write(text)

    if not report["passed"]:
        raise typer.Exit(EXIT_CHECKS_FAILED)
    raise typer.Exit(EXIT_OK)


if __name__ == "__main__":
    app()
