"""
`mckay`: build Q-hat and the induced action
"""

from pathlib import Path
from typing import Optional

import typer

from app.commands.common import execute, load_fixture
from app.services.suite_service import mckay_report


def mckay(
    document: Path = typer.Argument(..., help="Input JSON document"),
    out: Optional[Path] = typer.Option(None, "--out", help="Report directory"),
):
    """Build the generalized McKay quiver and the induced action."""
    execute(lambda: mckay_report(load_fixture(document)), out)
