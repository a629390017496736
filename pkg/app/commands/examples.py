"""
`examples`: built-in fixtures
"""

from pathlib import Path
from typing import Optional

import typer

from app.commands.common import execute
from app.services.suite_service import star_example_report, two_a5_example_report, fold_table_report


app = typer.Typer(help="Built-in worked examples", no_args_is_help=True)


@app.command("ex51")
def ex51(
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for sampled checks"),
    out: Optional[Path] = typer.Option(None, "--out", help="Report directory"),
):
    """D4 star with Z/6: Q-hat = D4 + D4 folding to G2."""
    execute(lambda: star_example_report(seed), out)


@app.command("ex52")
def ex52(
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for sampled checks"),
    out: Optional[Path] = typer.Option(None, "--out", help="Report directory"),
):
    """Two copies of A5 with Z/2 x Z/2: Q-hat = D4."""
    execute(lambda: two_a5_example_report(seed), out)


@app.command("fold-table")
def fold_table(
    n: int = typer.Option(2, "--n", min=1, help="Row size"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for sampled checks"),
    out: Optional[Path] = typer.Option(None, "--out", help="Report directory"),
):
    """Both Z/2 folding table rows at size n."""
    execute(lambda: fold_table_report(n, seed), out)
