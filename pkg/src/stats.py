"""
Stats Dashboard for copforge
Summarises saved run logs: verdicts, inference counts and certification
results per problem.
"""
from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Any

from .run_log import RUNS_DIR, RunEvent, RunEventType, load_run_log


class StatsDashboard:
    """Aggregate statistics over the JSONL run logs in a directory"""

    def __init__(self, runs_dir: str | Path | None = None) -> None:
        self.runs_dir = Path(runs_dir) if runs_dir is not None else RUNS_DIR
        self.runs = self._load_runs()

    def _load_runs(self) -> dict[str, list[RunEvent]]:
        runs: dict[str, list[RunEvent]] = {}
        if self.runs_dir.exists():
            for f in sorted(self.runs_dir.glob("*.jsonl")):
                try:
                    events = load_run_log(f)
                except (OSError, ValueError, TypeError):
                    continue
                if events:
                    runs[f.stem] = events
        return runs

    @staticmethod
    def _end(events: list[RunEvent]) -> RunEvent | None:
        for event in reversed(events):
            if event.event_type == RunEventType.RUN_END.value:
                return event
        return None

    def outcomes(self) -> list[dict[str, Any]]:
        """One row per run with a RUN_END event"""
        rows = []
        for run_id, events in self.runs.items():
            end = self._end(events)
            if end is None:
                continue
            stats = end.details.get("stats", {})
            rows.append({
                "run_id": run_id,
                "problem": end.problem,
                "status": end.details.get("status"),
                "inferences": stats.get("inferences", 0),
                "depth": stats.get("depth", 0),
                "seconds": round(end.elapsed_seconds or 0.0, 3),
                "certified": any(e.event_type == RunEventType.CERTIFIED.value for e in events),
            })
        return rows

    def get_total_stats(self) -> dict[str, Any]:
        rows = self.outcomes()
        if not rows:
            return {"total_runs": 0, "total_problems": 0, "solved": 0, "status_distribution": {}}
        statuses: dict[str, int] = defaultdict(int)
        for r in rows:
            statuses[r["status"]] += 1
        solved = [r for r in rows if r["status"] == "Theorem"]
        return {
            "total_runs": len(rows),
            "total_problems": len({r["problem"] for r in rows}),
            "solved": len(solved),
            "solved_problems": len({r["problem"] for r in solved}),
            "status_distribution": dict(statuses),
            "average_inferences": round(sum(r["inferences"] for r in rows) / len(rows), 1),
            "certified": sum(1 for r in rows if r["certified"]),
        }

    def get_problem_stats(self, problem: str) -> dict[str, Any]:
        rows = [r for r in self.outcomes() if r["problem"] and Path(r["problem"]).name == Path(problem).name]
        if not rows:
            return {"error": f"No runs for problem: {problem}"}
        solved = [r for r in rows if r["status"] == "Theorem"]
        return {
            "problem": problem,
            "total_runs": len(rows),
            "solved": len(solved),
            "fewest_inferences": min((r["inferences"] for r in solved), default=None),
            "average_seconds": round(sum(r["seconds"] for r in rows) / len(rows), 3),
        }

    def get_hardest(self, limit: int = 10) -> list[dict[str, Any]]:
        """Solved runs with the most inferences"""
        solved = [r for r in self.outcomes() if r["status"] == "Theorem"]
        ranked = sorted(solved, key=lambda r: r["inferences"], reverse=True)[:limit]
        return [{"rank": i + 1, **r} for i, r in enumerate(ranked)]


def print_dashboard(runs_dir: str | Path | None = None) -> None:
    """Print formatted dashboard to console"""
    dashboard = StatsDashboard(runs_dir)

    print("=" * 60)
    print("  COPFORGE - RUN STATISTICS")
    print("=" * 60)

    stats = dashboard.get_total_stats()
    print("\n📊 OVERALL")
    print("-" * 40)
    print(f"  Runs:             {stats['total_runs']}")
    print(f"  Problems:         {stats['total_problems']}")
    print(f"  Solved runs:      {stats['solved']}")
    print(f"  Avg inferences:   {stats.get('average_inferences', 'N/A')}")
    print(f"  Certified:        {stats.get('certified', 0)}")

    if stats.get("status_distribution"):
        print("\n📈 STATUS DISTRIBUTION")
        print("-" * 40)
        for status, count in sorted(stats["status_distribution"].items()):
            print(f"  {status:8}: {'█' * min(count, 40)} ({count})")

    hardest = dashboard.get_hardest(5)
    if hardest:
        print("\n🏆 HARDEST SOLVED")
        print("-" * 40)
        for entry in hardest:
            print(f"  #{entry['rank']} {entry['problem']}: {entry['inferences']} inferences")

    print("\n" + "=" * 60)
