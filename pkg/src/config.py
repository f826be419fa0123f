"""
Configuration Management for copforge
Loads settings from copforge.yaml with environment variable overrides.
"""
from __future__ import annotations

import copy
import os
import yaml
from pathlib import Path
from typing import Any
from dataclasses import dataclass, field


# Default configuration
DEFAULT_CONFIG = {
    "preprocess": {
        "eq_axioms": True,
        "definitional": False,
        "skolem_size_check": True
    },
    "search": {
        "engine": "clausal",
        "backend": "stream",
        "cut": False,
        "conj": False,
        "regularity": False,
        "lemmata": False,
        "lim_start": 1,
        "lim_max": 12,
        "timeout": 10.0,
        "beta_order": "plain"
    },
    "guidance": {
        "sigma1": 1.0,
        "sigma2": 1.0,
        "sigma3": 0.2,
        "mu": 1e-5
    },
    "mcps": {
        "iterations": "inf",
        "s_max": 50,
        "cp": 1.0,
        "prob": "open",
        "reward": "ratio",
        "expand": "min-branch",
        "seed": 0
    },
    "paths": {
        "include_dirs": [],
        "runs_dir": ".runs",
        "proofs_dir": ".proofs"
    },
    "logging": {
        "level": "INFO",
        "run_log": True
    }
}


@dataclass
class Config:
    """Prover configuration"""
    preprocess: dict[str, Any] = field(default_factory=lambda: copy.deepcopy(DEFAULT_CONFIG["preprocess"]))
    search: dict[str, Any] = field(default_factory=lambda: copy.deepcopy(DEFAULT_CONFIG["search"]))
    guidance: dict[str, Any] = field(default_factory=lambda: copy.deepcopy(DEFAULT_CONFIG["guidance"]))
    mcps: dict[str, Any] = field(default_factory=lambda: copy.deepcopy(DEFAULT_CONFIG["mcps"]))
    paths: dict[str, Any] = field(default_factory=lambda: copy.deepcopy(DEFAULT_CONFIG["paths"]))
    logging: dict[str, Any] = field(default_factory=lambda: copy.deepcopy(DEFAULT_CONFIG["logging"]))


def load_config(config_path: str | Path | None = None) -> Config:
    """Load configuration from file with env var overrides"""
    config_data = copy.deepcopy(DEFAULT_CONFIG)

    # Load from file if provided
    if config_path is None:
        config_path = os.environ.get("COPFORGE_CONFIG", "copforge.yaml")

    path = Path(config_path)
    if path.exists():
        with open(path) as f:
            file_config = yaml.safe_load(f)
            if file_config:
                _deep_merge(config_data, file_config)

    # Environment variable overrides
    _apply_env_overrides(config_data)

    return Config(**{k: v for k, v in config_data.items() if k in DEFAULT_CONFIG})


def _deep_merge(base: dict, override: dict) -> None:
    """Deep merge override into base"""
    for key, value in override.items():
        if key in base and isinstance(base[key], dict) and isinstance(value, dict):
            _deep_merge(base[key], value)
        else:
            base[key] = value


def _apply_env_overrides(config: dict) -> None:
    """Apply environment variable overrides"""
    if include := os.environ.get("COPFORGE_INCLUDE"):
        config["paths"]["include_dirs"] = [p for p in include.split(os.pathsep) if p]
    if timeout := os.environ.get("COPFORGE_TIMEOUT"):
        config["search"]["timeout"] = float(timeout)
    if seed := os.environ.get("COPFORGE_SEED"):
        config["mcps"]["seed"] = int(seed)

    # Directories and logging
    if runs := os.environ.get("COPFORGE_RUNS_DIR"):
        config["paths"]["runs_dir"] = runs
    if level := os.environ.get("COPFORGE_LOG_LEVEL"):
        config["logging"]["level"] = level.upper()


# Global config instance
_config: Config | None = None


def get_config() -> Config:
    """Get global config instance (lazy loaded)"""
    global _config
    if _config is None:
        _config = load_config()
    return _config


def reload_config() -> Config:
    """Force reload configuration"""
    global _config
    _config = load_config()
    return _config
