"""
Utility functions module
"""

from app.utils.linalg import nullspace, rank, rref, smith_normal_form

__all__ = ["nullspace", "rank", "rref", "smith_normal_form"]
