"""
Shared plumbing for the commands: input loading, report output and exit codes
"""

import logging
import re
import time
from pathlib import Path
from typing import Callable, Optional

import typer
from rich.console import Console
from rich.table import Table
from rich.text import Text

from app.config import settings
from app.core.exceptions import DocumentError, InvalidActionError, McKayFoldException
from app.schemas.document import load_document
from app.schemas.report import CheckStatus, Report
from app.services.pipeline import FoldingFixture
from app.services.suite_service import fixture_from_document


logger = logging.getLogger(__name__)

console = Console()

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_SCHEMA = 2
EXIT_INVALID_ACTION = 3

STATUS_STYLE = {
    CheckStatus.PASS: "green",
    CheckStatus.FAIL: "red",
    CheckStatus.INCONCLUSIVE: "yellow",
}


def load_fixture(path: Path) -> FoldingFixture:
    """
    Raises:
        DocumentError: If the document is unreadable or fails the schema
        InvalidActionError: If the action is not valid and admissible
    """
    document = load_document(str(path))
    if not document.name:
        document.name = path.stem
    return fixture_from_document(document)


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9.=-]+", "-", text).strip("-") or "report"


def render_table(report: Report) -> Table:
    table = Table(title=Text(f"{report.command} ({report.fixture or '-'})"))
    table.add_column("check")
    table.add_column("status")
    table.add_column("detail")
    for record in report.checks:
        table.add_row(
            Text(record.name),
            Text(record.status.value, style=STATUS_STYLE[record.status]),
            Text(record.detail),
        )
    return table


def render_text(report: Report) -> str:
    """Plain text table with the scalar data entries appended"""
    recorder = Console(width=120, color_system=None)
    with recorder.capture() as capture:
        recorder.print(render_table(report))
        for key, value in report.data.items():
            if isinstance(value, (int, str, bool, float)) or value is None:
                recorder.print(f"{key}: {value}", markup=False)
    return capture.get()


def write_report(report: Report, out: Optional[Path]) -> Path:
    """Write <command>-<fixture>.json and .txt under the report directory"""
    directory = out or Path(settings.report_dir)
    directory.mkdir(parents=True, exist_ok=True)
    stem = _slug(f"{report.command}-{report.fixture}")
    json_path = directory / f"{stem}.json"
    json_path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
    (directory / f"{stem}.txt").write_text(render_text(report), encoding="utf-8")
    logger.info(f"Report written: path={json_path}, checks={len(report.checks)}, passed={report.passed}")
    return json_path


def execute(build: Callable[[], Report], out: Optional[Path]) -> None:
    """
    Run a report builder and translate the outcome into an exit code

    Raises:
        typer.Exit: 2 on schema errors, 3 on invalid actions, 1 when a
            check fails or a construction is refused
    """
    started = time.perf_counter()
    try:
        report = build()
    except DocumentError as e:
        logger.error(f"Input document rejected: {e}")
        console.print(f"[red]Schema error:[/red] {e}")
        raise typer.Exit(code=EXIT_SCHEMA)
    except InvalidActionError as e:
        logger.error(f"Invalid action: {e}")
        console.print(f"[red]Invalid action:[/red] {e}")
        if e.report is not None:
            for violation in e.report.violations:
                console.print(f"  {violation.kind.value}: {violation.message}")
        raise typer.Exit(code=EXIT_INVALID_ACTION)
    except McKayFoldException as e:
        logger.error(f"Command failed: {e}")
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(code=EXIT_CHECK_FAILED)

    if settings.record_timing:
        report.timing = round(time.perf_counter() - started, 3)
    write_report(report, out)
    console.print(render_table(report))
    if not report.passed:
        raise typer.Exit(code=EXIT_CHECK_FAILED)
