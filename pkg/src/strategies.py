"""
Strategy Presets for copforge
Named prover configurations: clausal and nonclausal search with and without
restricted backtracking, conjecture-directed start, and internal guidance.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Any

from .config import Config


@dataclass
class StrategyPreset:
    """Configuration for one named prover setup"""
    name: str
    display_name: str

    # Search engine ("clausal" or "nonclausal")
    engine: str

    # Restricted backtracking and conjecture-directed start
    cut: bool
    conj: bool

    # Guidance ("none", "nb" or "mcps")
    guidance: str

    # Description shown by `copforge strategies`
    description: str

    beta_order: str = "plain"
    definitional: bool = False
    mcps: dict[str, Any] = field(default_factory=dict)

    def apply(self, config: Config) -> Config:
        """Copy of config with this preset's settings"""
        out = copy.deepcopy(config)
        out.search.update(engine=self.engine, cut=self.cut, conj=self.conj, beta_order=self.beta_order)
        out.preprocess["definitional"] = self.definitional
        out.mcps.update(self.mcps)
        return out


CLAUSAL_CUT_CONJ = StrategyPreset(
    name="clausal+cut+conj",
    display_name="Clausal, cut, conjecture start",
    engine="clausal",
    cut=True,
    conj=True,
    guidance="none",
    description="Clausal search with restricted backtracking, starting from conjecture clauses",
)

CLAUSAL_CUT = StrategyPreset(
    name="clausal+cut-conj",
    display_name="Clausal, cut",
    engine="clausal",
    cut=True,
    conj=False,
    guidance="none",
    description="Clausal search with restricted backtracking, any start clause",
)

CLAUSAL_CONJ = StrategyPreset(
    name="clausal-cut+conj",
    display_name="Clausal, complete, conjecture start",
    engine="clausal",
    cut=False,
    conj=True,
    guidance="none",
    description="Complete clausal search starting from conjecture clauses",
)

CLAUSAL_PLAIN = StrategyPreset(
    name="clausal-cut-conj",
    display_name="Clausal, complete",
    engine="clausal",
    cut=False,
    conj=False,
    guidance="none",
    description="Complete clausal search over all start clauses",
)

NONCLAUSAL_CUT = StrategyPreset(
    name="nonclausal+cut",
    display_name="Nonclausal, cut",
    engine="nonclausal",
    cut=True,
    conj=True,
    guidance="none",
    description="Nonclausal search on the nested matrix with restricted backtracking",
)

NONCLAUSAL_COMPLETE = StrategyPreset(
    name="nonclausal-cut",
    display_name="Nonclausal, complete",
    engine="nonclausal",
    cut=False,
    conj=True,
    guidance="none",
    description="Complete nonclausal search on the nested matrix",
)

NONCLAUSAL_LIFTED = StrategyPreset(
    name="nonclausal+cut+lifted",
    display_name="Nonclausal, cut, lifted β order",
    engine="nonclausal",
    cut=True,
    conj=True,
    guidance="none",
    beta_order="lifted",
    description="Nonclausal search proving the pruned matrix element first (proofs not certifiable)",
)

MCPS_BASE = StrategyPreset(
    name="mcps-base",
    display_name="Monte Carlo proof search",
    engine="clausal",
    cut=False,
    conj=True,
    guidance="mcps",
    mcps={"iterations": "inf", "prob": "open", "reward": "ratio", "expand": "min-branch", "s_max": 50, "cp": 1.0},
    description="Proof search inside the Monte Carlo tree, branch ratio reward",
)

MCPS_TUNED = StrategyPreset(
    name="mcps-tuned",
    display_name="Monte Carlo proof search, tuned",
    engine="clausal",
    cut=False,
    conj=True,
    guidance="mcps",
    mcps={"iterations": 27, "prob": "open", "reward": "closability", "expand": "min-depth", "s_max": 20, "cp": 0.75},
    description="Clausal search advised by short Monte Carlo runs with closability rewards",
)

NB_GUIDED = StrategyPreset(
    name="nb-guided",
    display_name="Naive Bayes guided clausal search",
    engine="clausal",
    cut=True,
    conj=True,
    guidance="nb",
    description="Clausal search trying contrapositives in Naive Bayes rank order (needs --train-in)",
)


STRATEGY_PRESETS: dict[str, StrategyPreset] = {
    p.name: p for p in (
        CLAUSAL_CUT_CONJ, CLAUSAL_CUT, CLAUSAL_CONJ, CLAUSAL_PLAIN,
        NONCLAUSAL_CUT, NONCLAUSAL_COMPLETE, NONCLAUSAL_LIFTED,
        MCPS_BASE, MCPS_TUNED, NB_GUIDED,
    )
}


def get_strategy(name: str) -> StrategyPreset:
    """Get strategy preset by name, defaults to clausal+cut+conj"""
    return STRATEGY_PRESETS.get(name.lower(), CLAUSAL_CUT_CONJ)


def list_strategies() -> list[dict[str, Any]]:
    """List all available strategy presets"""
    return [
        {
            "name": preset.name,
            "display_name": preset.display_name,
            "engine": preset.engine,
            "guidance": preset.guidance,
            "description": preset.description,
        }
        for preset in STRATEGY_PRESETS.values()
    ]
