"""
Parameter sweeps: every point of a settings grid on every problem of a
corpus, one CSV row per grid point.
"""
from __future__ import annotations

import copy
import csv
import io
import itertools
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Any, Iterable, Sequence

from .exceptions import ConfigurationError, CopForgeError
from .guidance.mcps import parse_iterations
from .prover import ProverSettings, prove_problem
from .tptp import Problem

CSV_FIELDS = ["config", "problems", "solved", "inferences", "iterations", "sim_steps", "discrimination"]

_SECTIONS = {"search": "search", "mcps": "mcps", "nb": "nb"}


@dataclass
class Outcome:
    config: str
    problem: str
    status: str
    inferences: int
    iterations: int = 0
    sim_steps: int = 0
    discrimination: float | None = None


def _coerce(field: str, current: Any, text: str) -> Any:
    if field == "iterations":
        return parse_iterations(text)
    if isinstance(current, bool):
        if text.lower() not in ("true", "false", "1", "0", "yes", "no"):
            raise ConfigurationError(f"not a boolean: {text}")
        return text.lower() in ("true", "1", "yes")
    if isinstance(current, int):
        return int(text)
    if isinstance(current, float):
        return float(text)
    return text


def parse_axes(specs: Iterable[str]) -> dict[str, list[str]]:
    """`section.key=v1,v2,...` strings to an ordered axis dict"""
    axes: dict[str, list[str]] = {}
    for spec in specs:
        key, sep, values = spec.partition("=")
        if not sep or "." not in key or not values:
            raise ConfigurationError(f"grid axis must look like section.key=v1,v2: {spec!r}")
        axes[key.strip()] = [v.strip() for v in values.split(",") if v.strip()]
    return axes


def expand_grid(base: ProverSettings, axes: dict[str, list[str]]) -> list[tuple[str, ProverSettings]]:
    """One settings copy per combination of axis values"""
    keys = list(axes)
    points = []
    for values in itertools.product(*(axes[k] for k in keys)) if keys else [()]:
        settings = copy.deepcopy(base)
        for key, value in zip(keys, values):
            section, _, field = key.partition(".")
            if section not in _SECTIONS:
                raise ConfigurationError(f"unknown grid section: {section}")
            target = getattr(settings, _SECTIONS[section])
            if not hasattr(target, field):
                raise ConfigurationError(f"unknown setting: {key}")
            try:
                setattr(target, field, _coerce(field, getattr(target, field), value))
            except ValueError as e:
                raise ConfigurationError(f"bad value for {key}: {value}") from e
        settings.validate()
        name = ",".join(f"{k.partition('.')[2]}={v}" for k, v in zip(keys, values)) or "base"
        points.append((name, settings))
    return points


def _run(task: tuple[str, ProverSettings, Problem]) -> Outcome:
    name, settings, problem = task
    label = problem.source or "problem"
    try:
        result = prove_problem(problem, settings).result
    except CopForgeError:
        return Outcome(name, label, "Error", 0)
    extra = result.stats.extra
    return Outcome(
        name, label, result.status, result.stats.inferences,
        int(extra.get("iterations", 0)), int(extra.get("sim_steps", 0)), extra.get("discrimination"),
    )


def run_sweep(
    points: Sequence[tuple[str, ProverSettings]],
    problems: Sequence[Problem],
    workers: int = 1,
) -> list[Outcome]:
    tasks = [(name, settings, problem) for name, settings in points for problem in problems]
    if workers <= 1:
        return [_run(t) for t in tasks]
    with Pool(workers) as pool:
        return pool.map(_run, tasks)


def summarize(outcomes: Sequence[Outcome]) -> list[dict[str, Any]]:
    """One row per grid point, in the order the points first appear"""
    rows: dict[str, dict[str, Any]] = {}
    discs: dict[str, list[float]] = {}
    for o in outcomes:
        row = rows.setdefault(o.config, {f: 0 for f in CSV_FIELDS} | {"config": o.config})
        row["problems"] += 1
        row["solved"] += o.status == "Theorem"
        row["inferences"] += o.inferences
        row["iterations"] += o.iterations
        row["sim_steps"] += o.sim_steps
        if o.discrimination is not None:
            discs.setdefault(o.config, []).append(o.discrimination)
    for name, row in rows.items():
        values = discs.get(name)
        row["discrimination"] = round(sum(values) / len(values), 3) if values else ""
    return list(rows.values())


def to_csv(rows: Sequence[dict[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
