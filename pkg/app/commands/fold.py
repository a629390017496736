"""
`fold`: the valued graph Gamma with its classification and dual check
"""

from pathlib import Path
from typing import Optional

import typer

from app.commands.common import execute, load_fixture
from app.services.suite_service import fold_report


def fold(
    document: Path = typer.Argument(..., help="Input JSON document"),
    out: Optional[Path] = typer.Option(None, "--out", help="Report directory"),
):
    """Fold (Q, G) into B, D, C and classify the result."""
    execute(lambda: fold_report(load_fixture(document)), out)
