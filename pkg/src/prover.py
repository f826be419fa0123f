"""
From a parsed problem to a search result: preprocessing, matrix building,
engine and guidance selection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .config import Config
from .exceptions import ConfigurationError
from .guidance.mcps import MCParams, prove_with_advisor
from .guidance.nb import NBParams, TrainDB, prove_guided
from .matrix import DEFINITIONAL, LIFTED, PLAIN, STANDARD, ClausalMatrix, NCMatrix, build_nc_matrix, clausify
from .preprocess import Prepared, preprocess
from .run_log import RunLogger
from .search import SearchOptions, SearchResult, prove_clausal, prove_nonclausal
from .tptp import Problem

CLAUSAL = "clausal"
NONCLAUSAL = "nonclausal"
ENGINES = (CLAUSAL, NONCLAUSAL)

NO_GUIDANCE = "none"
NB_GUIDANCE = "nb"
MCPS_GUIDANCE = "mcps"
GUIDANCE = (NO_GUIDANCE, NB_GUIDANCE, MCPS_GUIDANCE)


@dataclass
class ProverSettings:
    """Everything one prover run needs besides the problem"""
    engine: str = CLAUSAL
    guidance: str = NO_GUIDANCE
    definitional: bool = False
    eq_axioms: bool = True
    skolem_size_check: bool = True
    search: SearchOptions = field(default_factory=SearchOptions)
    nb: NBParams = field(default_factory=NBParams)
    mcps: MCParams = field(default_factory=MCParams)
    train_db: TrainDB | None = None

    @classmethod
    def from_config(cls, config: Config, guidance: str = NO_GUIDANCE) -> "ProverSettings":
        try:
            settings = cls(
                engine=config.search.get("engine", CLAUSAL),
                guidance=guidance,
                definitional=bool(config.preprocess.get("definitional", False)),
                eq_axioms=bool(config.preprocess.get("eq_axioms", True)),
                skolem_size_check=bool(config.preprocess.get("skolem_size_check", True)),
                search=SearchOptions.from_config(config.search),
                nb=NBParams.from_config(config.guidance),
                mcps=MCParams.from_config(config.mcps),
            )
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"Invalid configuration: {e}") from e
        settings.validate()
        return settings

    def validate(self) -> None:
        if self.engine not in ENGINES:
            raise ConfigurationError(f"Unknown engine: {self.engine}", {"engines": list(ENGINES)})
        if self.guidance not in GUIDANCE:
            raise ConfigurationError(f"Unknown guidance: {self.guidance}", {"guidance": list(GUIDANCE)})
        if self.search.beta_order not in (PLAIN, LIFTED):
            raise ConfigurationError(f"Unknown β order: {self.search.beta_order}")
        if self.engine == NONCLAUSAL and self.definitional:
            raise ConfigurationError("definitional clausification applies to the clausal engine only")
        if self.engine == NONCLAUSAL and self.guidance != NO_GUIDANCE:
            raise ConfigurationError("guidance is available for the clausal engine only")
        if self.search.lim_start < 0 or self.search.lim_max < self.search.lim_start:
            raise ConfigurationError("depth limits must satisfy 0 <= lim_start <= lim_max")
        if self.search.backend not in ("stream", "cps"):
            raise ConfigurationError(f"Unknown backend: {self.search.backend}")
        if self.engine == NONCLAUSAL and self.search.backend != "stream":
            raise ConfigurationError("the nonclausal engine runs on the stream backend only")
        try:
            self.mcps.validate()
        except ValueError as e:
            raise ConfigurationError(str(e)) from e

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "engine": self.engine,
            "guidance": self.guidance,
            "definitional": self.definitional,
            "eq_axioms": self.eq_axioms,
            "skolem_size_check": self.skolem_size_check,
            "search": self.search.to_dict(),
        }
        if self.guidance == MCPS_GUIDANCE:
            mcps = dict(vars(self.mcps))
            mcps["iterations"] = "inf" if math.isinf(self.mcps.iterations) else int(self.mcps.iterations)
            out["mcps"] = mcps
        if self.guidance == NB_GUIDANCE:
            out["nb"] = dict(vars(self.nb))
        return out


@dataclass
class Attempt:
    result: SearchResult
    matrix: ClausalMatrix | NCMatrix
    prepared: Prepared


def prepare(problem: Problem, settings: ProverSettings) -> Prepared:
    return preprocess(problem, eq_axioms=settings.eq_axioms, skolem_size_check=settings.skolem_size_check)


def build_matrix(prepared: Prepared, settings: ProverSettings) -> ClausalMatrix | NCMatrix:
    if settings.engine == NONCLAUSAL:
        return build_nc_matrix(prepared.formula, prepared.syms, prepared.marker)
    mode = DEFINITIONAL if settings.definitional else STANDARD
    return clausify(prepared.formula, mode, prepared.syms, prepared.marker)


def search(matrix: ClausalMatrix | NCMatrix, settings: ProverSettings, logger: RunLogger | None = None) -> SearchResult:
    if isinstance(matrix, NCMatrix):
        return prove_nonclausal(matrix, settings.search, logger)
    if settings.guidance == NB_GUIDANCE:
        return prove_guided(matrix, settings.search, settings.train_db or TrainDB(), settings.nb, logger)
    if settings.guidance == MCPS_GUIDANCE:
        return prove_with_advisor(matrix, settings.search, settings.mcps, settings.train_db, settings.nb, logger)
    return prove_clausal(matrix, settings.search, logger)


def prove_problem(problem: Problem, settings: ProverSettings, logger: RunLogger | None = None) -> Attempt:
    """Preprocess, build the matrix and search"""
    settings.validate()
    prepared = prepare(problem, settings)
    matrix = build_matrix(prepared, settings)
    if logger:
        logger.log_run_start(problem.source or "<input>", settings.to_dict())
    result = search(matrix, settings, logger)
    if logger:
        logger.log_run_end(result.status, {"inferences": result.stats.inferences, "depth": result.stats.depth})
    return Attempt(result, matrix, prepared)
