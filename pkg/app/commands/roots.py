"""
`roots`: positive roots of Q, Gamma and Q-hat up to a height bound
"""

from pathlib import Path
from typing import Optional

import typer

from app.commands.common import execute, load_fixture
from app.services.suite_service import roots_report


def roots(
    document: Path = typer.Argument(..., help="Input JSON document"),
    height: Optional[int] = typer.Option(None, "--height", min=1, help="Height bound outside finite type"),
    out: Optional[Path] = typer.Option(None, "--out", help="Report directory"),
):
    """Enumerate positive roots of the three lattices."""
    execute(lambda: roots_report(load_fixture(document), height), out)
