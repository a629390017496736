"""
Schemas module
"""

from app.schemas.document import InputDocument, load_document, parse_document
from app.schemas.report import (
    CheckRecord,
    CheckStatus,
    Report,
    ValidationReport,
)

__all__ = [
    "InputDocument",
    "load_document",
    "parse_document",
    "CheckRecord",
    "CheckStatus",
    "Report",
    "ValidationReport",
]
