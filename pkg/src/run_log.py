"""
Run Logging for copforge
Records prover events (deepening levels, proofs, timeouts, certification)
with timestamps and saves them as JSONL per run.
"""
from __future__ import annotations

import json
import time
from pathlib import Path
from datetime import datetime
from typing import Any
from collections import Counter
from dataclasses import dataclass, asdict, field
from enum import Enum


RUNS_DIR = Path(".runs")


class RunLevel(Enum):
    """Run event severity levels"""
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


_LEVEL_ORDER = {level: rank for rank, level in enumerate(RunLevel)}


class RunEventType(Enum):
    """Types of run events"""
    # Run lifecycle
    RUN_START = "RUN_START"
    RUN_END = "RUN_END"

    # Search progress
    LEVEL_START = "LEVEL_START"
    LEVEL_DONE = "LEVEL_DONE"
    PROOF_FOUND = "PROOF_FOUND"
    TIMEOUT = "TIMEOUT"
    EXHAUSTED = "EXHAUSTED"
    MCTS_ITERATION = "MCTS_ITERATION"

    # Certification and learning
    CERTIFIED = "CERTIFIED"
    CERT_FAILED = "CERT_FAILED"
    TRAINING = "TRAINING"

    ERROR = "ERROR"


@dataclass
class RunEvent:
    """Single run event record"""
    timestamp: str
    event_type: str
    level: str
    run_id: str
    problem: str | None
    depth: int | None

    # Event details
    message: str
    details: dict[str, Any] = field(default_factory=dict)

    # Context
    elapsed_seconds: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


class RunLogger:
    """Collects events for one prover run"""

    def __init__(
        self,
        run_id: str,
        problem: str | None = None,
        min_level: RunLevel | str = RunLevel.INFO,
    ) -> None:
        self.run_id = run_id
        self.problem = problem
        self.min_level = RunLevel(min_level) if isinstance(min_level, str) else min_level
        self.start_time = time.time()
        self.events: list[RunEvent] = []
        self._current_depth: int | None = None

    def _now_iso(self) -> str:
        return datetime.now().isoformat()

    def _elapsed(self) -> float:
        return time.time() - self.start_time

    def set_depth(self, depth: int) -> None:
        """Update current deepening level"""
        self._current_depth = depth

    def log(
        self,
        event_type: RunEventType,
        message: str,
        level: RunLevel = RunLevel.INFO,
        details: dict[str, Any] | None = None,
        depth: int | None = None
    ) -> RunEvent | None:
        """Log a run event; events below the logger's level are dropped"""
        if _LEVEL_ORDER[level] < _LEVEL_ORDER[self.min_level]:
            return None
        event = RunEvent(
            timestamp=self._now_iso(),
            event_type=event_type.value,
            level=level.value,
            run_id=self.run_id,
            problem=self.problem,
            depth=depth if depth is not None else self._current_depth,
            message=message,
            details=details or {},
            elapsed_seconds=self._elapsed()
        )

        self.events.append(event)
        return event

    # Convenience methods for common events
    def log_run_start(self, problem: str, options: dict[str, Any] | None = None) -> RunEvent | None:
        """Log run start"""
        self.problem = problem
        return self.log(
            RunEventType.RUN_START,
            f"Run on '{problem}' started",
            details={"options": options or {}}
        )

    def log_run_end(self, status: str, stats: dict[str, Any] | None = None) -> RunEvent | None:
        """Log run end with the SZS status"""
        return self.log(
            RunEventType.RUN_END,
            f"Run ended: {status}",
            details={"status": status, "stats": stats or {}, "total_events": len(self.events)}
        )

    def log_level(self, depth: int, done: bool = False, inferences: int = 0) -> RunEvent | None:
        """Log the start or completion of a deepening level"""
        self.set_depth(depth)
        if done:
            return self.log(
                RunEventType.LEVEL_DONE,
                f"Level {depth} finished",
                level=RunLevel.DEBUG,
                details={"inferences": inferences}
            )
        return self.log(RunEventType.LEVEL_START, f"Level {depth} started", level=RunLevel.DEBUG)

    def log_proof(self, depth: int, inferences: int, engine: str) -> RunEvent | None:
        """Log a found proof"""
        return self.log(
            RunEventType.PROOF_FOUND,
            f"Proof found at depth {depth}",
            details={"inferences": inferences, "engine": engine},
            depth=depth
        )

    def log_timeout(self, inferences: int) -> RunEvent | None:
        """Log a search timeout"""
        return self.log(
            RunEventType.TIMEOUT,
            "Search timed out",
            level=RunLevel.WARNING,
            details={"inferences": inferences}
        )

    def log_exhausted(self, inferences: int) -> RunEvent | None:
        """Log a completed level without pruning and without proof"""
        return self.log(
            RunEventType.EXHAUSTED,
            "Search space exhausted",
            level=RunLevel.WARNING,
            details={"inferences": inferences}
        )

    def log_certification(self, ok: bool, report: str = "") -> RunEvent | None:
        """Log the LK certification verdict"""
        if ok:
            return self.log(RunEventType.CERTIFIED, "LK certificate accepted")
        return self.log(
            RunEventType.CERT_FAILED,
            f"LK certificate rejected: {report}",
            level=RunLevel.ERROR,
            details={"report": report}
        )

    def log_training(self, path: str | Path, contrapositives: int) -> RunEvent | None:
        return self.log(
            RunEventType.TRAINING,
            f"Training data written to {path}",
            details={"path": str(path), "contrapositives": contrapositives}
        )

    def log_error(self, error: str, details: dict[str, Any] | None = None) -> RunEvent | None:
        """Log an error"""
        return self.log(
            RunEventType.ERROR,
            error,
            level=RunLevel.ERROR,
            details=details
        )

    def save(self, directory: Path | None = None) -> Path:
        """Save run log to file"""
        directory = Path(directory) if directory is not None else RUNS_DIR
        directory.mkdir(parents=True, exist_ok=True)
        filepath = directory / f"{self.run_id}.jsonl"
        with open(filepath, 'w') as f:
            for event in self.events:
                f.write(json.dumps(event.to_dict()) + '\n')
        return filepath

    def get_summary(self) -> dict[str, Any]:
        """Get run summary"""
        return {
            "run_id": self.run_id,
            "problem": self.problem,
            "total_events": len(self.events),
            "duration_seconds": self._elapsed(),
            "events_by_type": dict(Counter(e.event_type for e in self.events)),
            "events_by_level": dict(Counter(e.level for e in self.events)),
        }


def load_run_log(path: Path | str) -> list[RunEvent] | None:
    """Load a run log from file"""
    filepath = Path(path)
    if not filepath.exists():
        return None

    events = []
    with open(filepath) as f:
        for line in f:
            if line.strip():
                events.append(RunEvent(**json.loads(line)))
    return events


def list_run_logs(directory: Path | None = None, limit: int = 20) -> list[dict[str, Any]]:
    """List recent run logs"""
    directory = Path(directory) if directory is not None else RUNS_DIR
    if not directory.exists():
        return []
    logs = []
    for f in sorted(directory.glob("*.jsonl"), reverse=True)[:limit]:
        try:
            with open(f) as fp:
                event_count = sum(1 for line in fp if line.strip())
        except OSError:
            event_count = 0

        logs.append({
            "run_id": f.stem,
            "event_count": event_count,
            "file": f.name
        })
    return logs
