"""
Core utilities module
"""

from app.core.exceptions import McKayFoldException
from app.core.logging import setup_logging

__all__ = ["McKayFoldException", "setup_logging"]
