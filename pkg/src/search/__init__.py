"""
Connection proof search engines.
"""
from .base import (
    CPS, GAVE_UP, STREAM, THEOREM, TIMEOUT,
    Deadline, SearchOptions, SearchResult, SearchStats,
)
from .clausal import ClausalSearch, prove_clausal, restricted_backtracking
from .nonclausal import NonclausalSearch, order_beta, prove_nonclausal

__all__ = [
    "THEOREM", "GAVE_UP", "TIMEOUT", "STREAM", "CPS",
    "Deadline", "SearchOptions", "SearchResult", "SearchStats",
    "ClausalSearch", "prove_clausal", "restricted_backtracking",
    "NonclausalSearch", "order_beta", "prove_nonclausal",
]
