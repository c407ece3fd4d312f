#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
#  Copyright (C) 2024-2026 Rouzax
#
#  SPDX-License-Identifier: GPL-3.0-or-later
#  See LICENSE.txt for more information.
#

"""
OArrays Settings Management.

Settings come from four places, highest priority first:

    1. command-line flags (passed in as overrides)
    2. a config file of 'key = value' lines ('#' comments)
    3. environment variables OARRAYS_SEARCH_BUDGET, OARRAYS_CAPACITY_LIMIT,
       OARRAYS_LOG_DIR
    4. defaults from constants.py

Settings are read when load_settings() is called, never at import time.

Logging:
    Module: settings
    Events:
        - settings.load (INFO): Settings resolved, with their sources
        - settings.unknown_key (WARNING): Config file key not recognized
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

from resources.lib.constants import (
    DEFAULT_CAPACITY_LIMIT,
    DEFAULT_RESULT_LIMIT,
    DEFAULT_SEARCH_BUDGET,
    ENV_CAPACITY_LIMIT,
    ENV_LOG_DIR,
    ENV_SEARCH_BUDGET,
    SETTING_CAPACITY_LIMIT,
    SETTING_DEBUG_LOGGING,
    SETTING_LOG_DIR,
    SETTING_RESULT_LIMIT,
    SETTING_SEARCH_BUDGET,
    SETTING_WORKERS,
)
from resources.lib.errors import UsageError
from resources.lib.utils import StructuredLogger, get_logger

# Module-level logger (initialized lazily)
_log: Optional[StructuredLogger] = None


def _get_log() -> StructuredLogger:
    """Get or create the module logger."""
    global _log
    if _log is None:
        _log = get_logger('settings')
    return _log


@dataclass
class ToolSettings:
    """
    Container for all tool settings.

    Groups everything the commands need into a single object for easier
    passing between components.
    """
    # Search
    search_budget: int = DEFAULT_SEARCH_BUDGET
    result_limit: int = DEFAULT_RESULT_LIMIT

    # Size guard for materialized arrays
    capacity_limit: int = DEFAULT_CAPACITY_LIMIT

    # Catalog thread pool
    workers: int = 1

    # Logging
    debug_logging: bool = False
    verbose: bool = False
    log_dir: Optional[str] = None


def _positive_int(key: str, raw: str) -> int:
    try:
        value = int(raw.replace("_", "").replace(",", ""))
    except ValueError:
        raise UsageError(f"setting {key}: expected an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError(f"setting {key}: must be at least 1, got {value}")
    return value


def _boolean(key: str, raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"setting {key}: expected true or false, got {raw!r}")


def _text(key: str, raw: str) -> str:
    return raw


_PARSERS: Dict[str, Callable[[str, str], Any]] = {
    SETTING_SEARCH_BUDGET: _positive_int,
    SETTING_CAPACITY_LIMIT: _positive_int,
    SETTING_RESULT_LIMIT: _positive_int,
    SETTING_WORKERS: _positive_int,
    SETTING_DEBUG_LOGGING: _boolean,
    SETTING_LOG_DIR: _text,
}

_ENVIRONMENT: Tuple[Tuple[str, str], ...] = (
    (ENV_SEARCH_BUDGET, SETTING_SEARCH_BUDGET),
    (ENV_CAPACITY_LIMIT, SETTING_CAPACITY_LIMIT),
    (ENV_LOG_DIR, SETTING_LOG_DIR),
)


def parse_config_text(text: str, source: str = "<config>") -> Dict[str, Any]:
    """
    Parse 'key = value' lines. Unknown keys are skipped with a warning.

    Raises:
        UsageError: For lines without '=' or values that do not parse.
    """
    values: Dict[str, Any] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{source}:{number}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        parser = _PARSERS.get(key)
        if parser is None:
            _get_log().warning("Unknown config key ignored", event="settings.unknown_key",
                               key=key, source=source, line=number)
            continue
        values[key] = parser(key, value)
    return values


def load_config_file(path: str) -> Dict[str, Any]:
    """Read and parse a config file; a missing file is a usage error."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise UsageError(f"cannot read config file {path}: {e.strerror or e}") from None
    return parse_config_text(text, source=path)


def load_settings(
    overrides: Optional[Mapping[str, Any]] = None,
    config_path: Optional[str] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> ToolSettings:
    """
    Resolve settings from flags, config file, environment and defaults.

    Args:
        overrides: Flag values; None entries mean 'not given'.
        config_path: Optional config file.
        environ: Environment mapping (defaults to os.environ).

    Returns:
        ToolSettings with every field resolved.
    """
    env = os.environ if environ is None else environ
    resolved: Dict[str, Any] = {}
    sources: Dict[str, str] = {}

    for variable, key in _ENVIRONMENT:
        raw = env.get(variable)
        if raw:
            resolved[key] = _PARSERS[key](key, raw)
            sources[key] = "env"

    if config_path:
        for key, value in load_config_file(config_path).items():
            resolved[key] = value
            sources[key] = "config"

    known = {f.name for f in fields(ToolSettings)}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in known:
            raise UsageError(f"unknown setting {key!r}")
        resolved[key] = value
        sources[key] = "flag"

    settings = ToolSettings(**resolved)
    _get_log().info(
        "Settings loaded",
        event="settings.load",
        search_budget=settings.search_budget,
        capacity_limit=settings.capacity_limit,
        result_limit=settings.result_limit,
        workers=settings.workers,
        debug_logging=settings.debug_logging,
        sources=",".join(f"{k}:{v}" for k, v in sorted(sources.items())) or "defaults",
    )
    return settings
