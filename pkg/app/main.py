"""
mckay-fold - generalized McKay quivers and folding
Command line entry point
"""

import logging
from typing import Optional

import typer

from app.commands import examples, fold, mckay, roots, verify
from app.config import settings
from app.core.logging import setup_logging

logger = logging.getLogger(__name__)

app = typer.Typer(
    name=settings.app_name,
    help="Generalized McKay quivers, folding of Cartan data and the checks relating them",
    no_args_is_help=True,
)


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Root log level (default from settings)"),
):
    setup_logging(log_level or settings.log_level)
    logger.debug(f"Starting {settings.app_name} {settings.app_version}")


# Register commands
app.command("mckay")(mckay.mckay)
app.command("fold")(fold.fold)
app.command("roots")(roots.roots)
app.add_typer(verify.app, name="verify")
app.add_typer(examples.app, name="examples")


if __name__ == "__main__":
    app()
