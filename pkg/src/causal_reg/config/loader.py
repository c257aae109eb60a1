"""Config loader: reads YAML, applies CAUSALREG_* env var overrides and CLI overrides."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Mapping

import yaml
from pydantic import ValidationError

from causal_reg.config.schema import AppConfig
from causal_reg.errors import ConfigError

_ENV_OVERRIDES = {
    "CAUSALREG_LOG_LEVEL": "logging.level",
    "CAUSALREG_LOG_FORMAT": "logging.format",
    "CAUSALREG_OUTPUT_DIR": "output_dir",
    "CAUSALREG_SEED": "seed",
}


def _set_dotted(data: dict, key: str, value: Any) -> None:
    *parents, leaf = key.split(".")
    node = data
    for part in parents:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigError(f"cannot set {key!r}: {part!r} is not a section")
        node = child
    node[leaf] = value


def _validate(data: dict) -> AppConfig:
    try:
        return AppConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc


def load_config(path: str | Path | None = None) -> AppConfig:
    """Load config from a YAML file, then apply env var overrides.

    If *path* is None, returns defaults. A path that does not exist is an error.

    Environment variable overrides:
        CAUSALREG_LOG_LEVEL   -> logging.level
        CAUSALREG_LOG_FORMAT  -> logging.format
        CAUSALREG_OUTPUT_DIR  -> output_dir
        CAUSALREG_SEED        -> seed
    """
    data: dict = {}
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file not found: {p}")
        try:
            with open(p) as f:
                data = yaml.safe_load(f) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"config file {p} is not valid YAML: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config file {p} must hold a mapping at top level")

    for var, key in _ENV_OVERRIDES.items():
        value = os.environ.get(var)
        if value:
            _set_dotted(data, key, value)

    return _validate(data)


def apply_overrides(config: AppConfig, overrides: Mapping[str, Any]) -> AppConfig:
    """Return a new config with dotted keys (e.g. "selection.folds") replaced.

    None values are skipped so unset CLI flags leave the config alone.
    """
    data = config.model_dump()
    for key, value in overrides.items():
        if value is None:
            continue
        node: Any = data
        for part in key.split("."):
            if not isinstance(node, dict) or part not in node:
                raise ConfigError(f"unknown config key {key!r}")
            node = node[part]
        _set_dotted(data, key, value)
    return _validate(data)
