"""
`verify`: the folding correspondences and duality
"""

from pathlib import Path
from typing import Optional

import typer

from app.commands.common import execute, load_fixture
from app.services.suite_service import duality_report, root_correspondence_report, fixed_point_report


app = typer.Typer(help="Verification suites", no_args_is_help=True)


@app.command("thm1.1")
def roots_correspondence(
    document: Path = typer.Argument(..., help="Input JSON document"),
    height: Optional[int] = typer.Option(None, "--height", min=1, help="Height bound outside finite type"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for sampled checks"),
    out: Optional[Path] = typer.Option(None, "--out", help="Report directory"),
):
    """Roots of Q-hat over roots of Gamma, and the lattice identities."""
    execute(lambda: root_correspondence_report(load_fixture(document), height, seed), out)


@app.command("thm1.2")
def fixed_points(
    document: Path = typer.Argument(..., help="Input JSON document"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for sampled checks"),
    out: Optional[Path] = typer.Option(None, "--out", help="Report directory"),
):
    """Fixed points of g(Q-hat) against g(Gamma)."""
    execute(lambda: fixed_point_report(load_fixture(document), seed), out)


@app.command("duality")
def duality(
    document: Path = typer.Argument(..., help="Input JSON document"),
    out: Optional[Path] = typer.Option(None, "--out", help="Report directory"),
):
    """Transpose duality of the folds and the double McKay quiver."""
    execute(lambda: duality_report(load_fixture(document)), out)
