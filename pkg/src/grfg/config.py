"""JSON run configuration with strict key checking."""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

from .downstream import ForestConfig
from .engine import RunConfig
from .info import InfoConfig
from .rl import AgentConfig

SECTIONS = {"info": InfoConfig, "agent": AgentConfig, "forest": ForestConfig}


class ConfigError(ValueError):
    pass


def _fields(cls) -> set[str]:
    return {f.name for f in dataclasses.fields(cls)}


def config_from_dict(doc: dict, **overrides) -> RunConfig:
    """Build a RunConfig from a nested dict; unknown keys raise ConfigError."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    top = {}
    for key, value in doc.items():
        if key in SECTIONS:
            cls = SECTIONS[key]
            if not isinstance(value, dict):
                raise ConfigError(f"section {key!r} must be an object")
            unknown = sorted(set(value) - _fields(cls))
            if unknown:
                raise ConfigError(f"unknown config key {key}.{unknown[0]}")
            top[key] = cls(**value)
        elif key in _fields(RunConfig):
            top[key] = value
        else:
            raise ConfigError(f"unknown config key {key}")
    top.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**top)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def load_config(path, **overrides) -> RunConfig:
    if path is None:
        return config_from_dict({}, **overrides)
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return config_from_dict(doc, **overrides)


def config_to_dict(cfg: RunConfig) -> dict:
    return dataclasses.asdict(cfg)
