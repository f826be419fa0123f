"""
copforge
Connection tableaux prover with clausal and nonclausal search, internal
guidance and LK proof certification.

Quick Start:
    copforge prove problem.p                 # Prove a TPTP problem
    copforge prove problem.p --certify       # ... and check the proof in LK
    copforge prove problem.p --nonclausal    # Nonclausal engine
    copforge strategies                      # Show strategy presets
    copforge stats                           # Show run statistics

For more commands:
    copforge --help
"""
from __future__ import annotations

from .version import __author__, __version__

# Core exports
from .tptp import Problem, load_problem, parse_problem
from .preprocess import Prepared, preprocess
from .matrix import ClausalMatrix, NCMatrix, build_nc_matrix, clausify
from .search import SearchOptions, SearchResult, prove_clausal, prove_nonclausal
from .prover import ProverSettings, prove_problem
from .lk import certify, check_lk
from .stats import StatsDashboard
from .run_log import RunLogger
from .config import load_config, get_config
from .exceptions import (
    CopForgeError,
    TPTPSyntaxError,
    ConfigurationError,
    ProofReplayError,
    UnsupportedProofError,
)

__all__ = [
    # Version
    "__version__",
    "__author__",

    # Core
    "Problem",
    "Prepared",
    "ClausalMatrix",
    "NCMatrix",
    "SearchOptions",
    "SearchResult",
    "ProverSettings",
    "RunLogger",
    "StatsDashboard",

    # Pipeline
    "load_problem",
    "parse_problem",
    "preprocess",
    "clausify",
    "build_nc_matrix",
    "prove_clausal",
    "prove_nonclausal",
    "prove_problem",
    "certify",
    "check_lk",

    # Config
    "load_config",
    "get_config",

    # Exceptions
    "CopForgeError",
    "TPTPSyntaxError",
    "ConfigurationError",
    "ProofReplayError",
    "UnsupportedProofError",
]
