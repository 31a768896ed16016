"""Solver configuration: optional JSON file merged with command line overrides."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import voluptuous as vol

from .const import DEFAULT_LOG_LEVEL, LOG_LEVELS
from .exceptions import MalformedInstanceError

_LOGGER = logging.getLogger(__name__)

CONF_PARALLEL_AGENTS = "parallel_agents"
CONF_MAX_WORKERS = "max_workers"
CONF_LOG_LEVEL = "log_level"

CONFIG_SCHEMA = vol.Schema({
    vol.Optional(CONF_PARALLEL_AGENTS, default=False): bool,
    vol.Optional(CONF_MAX_WORKERS, default=None): vol.Any(None, vol.All(int, vol.Range(min=1))),
    vol.Optional(CONF_LOG_LEVEL, default=DEFAULT_LOG_LEVEL): vol.All(vol.Upper, vol.In(LOG_LEVELS)),
})


@dataclass(frozen=True)
class SolverConfig:
    """Validated solver settings."""
    parallel_agents: bool = False
    max_workers: int | None = None
    log_level: str = DEFAULT_LOG_LEVEL

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SolverConfig":
        try:
            validated = CONFIG_SCHEMA(dict(data))
        except vol.Invalid as err:
            raise MalformedInstanceError(f"Invalid configuration: {err}") from err
        return cls(validated[CONF_PARALLEL_AGENTS], validated[CONF_MAX_WORKERS], validated[CONF_LOG_LEVEL])


def load_config(path: str | Path | None = None, overrides: Mapping[str, Any] | None = None) -> SolverConfig:
    """Read ``path`` (if given) and apply ``overrides``; keys overridden with None keep the file value."""
    data: dict[str, Any] = {}
    if path is not None:
        try:
            loaded = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as err:
            raise MalformedInstanceError(f"Cannot read configuration {path}: {err.strerror or err}") from err
        except json.JSONDecodeError as err:
            raise MalformedInstanceError(f"Configuration {path} is not valid JSON: {err}") from err
        if not isinstance(loaded, dict):
            raise MalformedInstanceError(f"Configuration {path} must hold a JSON object")
        data.update(loaded)
        _LOGGER.debug("Loaded configuration keys %s from %s", sorted(loaded), path)

    data.update({key: value for key, value in (overrides or {}).items() if value is not None})
    return SolverConfig.from_dict(data)
