"""
Shared pieces of the search engines: options, statistics, results, the
deadline timer and the iterative-deepening driver.
"""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field, asdict
from typing import Any, Callable

from ..exceptions import SearchTimeout
from ..proof import Proof
from ..run_log import RunLogger

THEOREM = "Theorem"
GAVE_UP = "GaveUp"
TIMEOUT = "Timeout"

STREAM = "stream"
CPS = "cps"


@dataclass
class SearchOptions:
    """Knobs shared by both engines"""
    cut: bool = False
    conj: bool = False
    backend: str = STREAM
    lim_start: int = 1
    lim_max: int = 12
    timeout: float | None = 10.0
    regularity: bool = False
    lemmata: bool = False
    beta_order: str = "plain"

    @classmethod
    def from_config(cls, search: dict[str, Any]) -> "SearchOptions":
        known = {k: v for k, v in search.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class SearchStats:
    inferences: int = 0
    depth: int = 0
    levels: int = 0
    elapsed_seconds: float = 0.0
    pruned: bool = False
    attempts: Counter = field(default_factory=Counter)
    extra: dict[str, Any] = field(default_factory=dict)

    def line(self) -> str:
        """Statistics line printed after the verdict"""
        parts = [f"inferences={self.inferences}", f"depth={self.depth}"]
        parts += [f"{k}={v}" for k, v in self.extra.items()]
        return " ".join(parts)


@dataclass
class SearchResult:
    status: str
    proof: Proof | None
    stats: SearchStats
    engine: str = "clausal"

    @property
    def proved(self) -> bool:
        return self.status == THEOREM

    @property
    def exhausted(self) -> bool:
        """No proof at any depth and no branch was cut off by the depth limit"""
        return self.status == GAVE_UP and not self.stats.pruned


class Deadline:
    """Wall-clock budget checked from inside the search loops"""

    def __init__(self, seconds: float | None = None) -> None:
        self.seconds = seconds
        self._start = time.monotonic()

    def elapsed(self) -> float:
        return time.monotonic() - self._start

    def remaining(self) -> float:
        if self.seconds is None:
            return float("inf")
        return max(0.0, self.seconds - self.elapsed())

    def expired(self) -> bool:
        return self.seconds is not None and self.elapsed() > self.seconds

    def check(self) -> None:
        if self.expired():
            raise SearchTimeout(f"Search exceeded {self.seconds}s", {"elapsed": self.elapsed()})


def deepen(
    run_level: Callable[[int], Proof | None],
    opts: SearchOptions,
    stats: SearchStats,
    deadline: Deadline,
    inferences: Callable[[], int],
    engine: str,
    logger: RunLogger | None = None,
) -> SearchResult:
    """Run run_level for lim = lim_start, lim_start+1, ... until a proof or a verdict"""
    status, proof = GAVE_UP, None
    try:
        for lim in range(opts.lim_start, opts.lim_max + 1):
            stats.depth = lim
            stats.levels += 1
            stats.pruned = False
            proof = run_level(lim)
            stats.inferences = inferences()
            if logger:
                logger.log_level(lim, proof is not None, stats.inferences)
            if proof is not None:
                status = THEOREM
                break
            if not stats.pruned:
                break
    except SearchTimeout:
        status = TIMEOUT
        if logger:
            logger.log_timeout(inferences())
    stats.inferences = inferences()
    stats.elapsed_seconds = deadline.elapsed()
    if logger:
        if status == THEOREM:
            logger.log_proof(stats.depth, stats.inferences, engine)
        elif status == GAVE_UP and not stats.pruned:
            logger.log_exhausted(stats.inferences)
    return SearchResult(status, proof, stats, engine)
