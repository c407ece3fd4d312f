#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
#  Copyright (C) 2024-2026 Rouzax
#
#  SPDX-License-Identifier: GPL-3.0-or-later
#  See LICENSE.txt for more information.
#

"""
Shared utilities for OArrays: structured logging and small text helpers.

Logging:
    Every module logs through get_logger(name). Lines look like

        [OArrays.search] Search finished | event=search.done, found=2

    and are routed by level:

        ERROR, WARNING  terminal (stderr) always, log file when debug is on
        INFO            terminal only in verbose mode, log file when debug is on
        DEBUG           log file only

    stdout belongs to command output and is never written here.
    INFO and above carry event="domain.action"; a missing event is filled in
    as misc.<level> and flagged with _missing_event=True so it can be found.
    See docs/logging.md.
"""
from __future__ import annotations

import os
import re
import sys
import threading
import time
import traceback
from contextlib import contextmanager
from datetime import datetime as dt
from typing import Any, Dict, Iterator, Iterable, Optional, TextIO, Tuple

from resources.lib.constants import (
    LOG_DIR_NAME,
    LOG_FILENAME,
    LOG_MAX_ROTATED_FILES,
    LOG_MAX_SIZE_BYTES,
    LOG_MAX_VALUE_LENGTH,
    LOG_PREFIX,
    LOG_TIMESTAMP_FORMAT,
    LOG_TIMESTAMP_TRIM,
)


class _LogFile:
    """Size-capped debug log with numbered backups (oarrays.1.log is the newest)."""

    def __init__(self, directory: str) -> None:
        self.directory = directory
        self.path = os.path.join(directory, LOG_FILENAME)
        self._handle: Optional[TextIO] = None
        self._size = 0

    def _backup(self, n: int) -> str:
        stem, ext = os.path.splitext(LOG_FILENAME)
        return os.path.join(self.directory, f"{stem}.{n}{ext}")

    def _shift_backups(self) -> None:
        try:
            if os.path.exists(self._backup(LOG_MAX_ROTATED_FILES)):
                os.remove(self._backup(LOG_MAX_ROTATED_FILES))
            for n in range(LOG_MAX_ROTATED_FILES - 1, 0, -1):
                if os.path.exists(self._backup(n)):
                    os.replace(self._backup(n), self._backup(n + 1))
            if os.path.exists(self.path):
                os.replace(self.path, self._backup(1))
        except OSError:
            pass

    def open(self) -> None:
        os.makedirs(self.directory, exist_ok=True)
        size = os.path.getsize(self.path) if os.path.exists(self.path) else 0
        if size > LOG_MAX_SIZE_BYTES:
            self._shift_backups()
            size = 0
        self._handle = open(self.path, "a", encoding="utf-8")
        self._size = size

    def write(self, line: str) -> None:
        if self._handle is None:
            return
        self._handle.write(line)
        self._handle.flush()
        self._size += len(line.encode("utf-8"))
        if self._size > LOG_MAX_SIZE_BYTES:
            self.close()
            self._shift_backups()
            self.open()

    def close(self) -> None:
        if self._handle is not None:
            try:
                self._handle.close()
            except OSError:
                pass
            self._handle = None


class StructuredLogger:
    """
    Module logger with key=value context.

    Configuration is class-level and shared by every instance; file writes
    are serialized by a lock so catalog worker threads can log freely.

    Example:
        log = get_logger('search')
        log.info("Search finished", event="search.done", found=2)
        log.debug("Candidate rejected", column=17)
    """

    _initialized: bool = False
    _debug_enabled: bool = False
    _verbose: bool = False
    _log_dir: Optional[str] = None
    _stream: Optional[TextIO] = None
    _file: Optional[_LogFile] = None
    _lock = threading.Lock()

    def __init__(self, module_name: str) -> None:
        self.module = module_name

    @classmethod
    def initialize(
        cls,
        debug_enabled: bool = False,
        verbose: bool = False,
        log_dir: Optional[str] = None,
        stream: Optional[TextIO] = None,
    ) -> None:
        """
        Configure routing. Repeat calls reconfigure; the log file is opened
        the first time debug logging is switched on.

        Args:
            debug_enabled: Write DEBUG (and everything else) to the log file.
            verbose: Echo INFO lines to the terminal.
            log_dir: Directory for oarrays.log (default ./logs).
            stream: Terminal stream; sys.stderr when None.
        """
        with cls._lock:
            cls._initialized = True
            cls._debug_enabled = debug_enabled
            cls._verbose = verbose
            cls._stream = stream
            if log_dir is not None:
                cls._log_dir = log_dir
            if debug_enabled and cls._file is None:
                log_file = _LogFile(cls._log_dir or os.path.join(os.getcwd(), LOG_DIR_NAME))
                try:
                    log_file.open()
                    cls._file = log_file
                except OSError as e:
                    cls._to_terminal(f"[{LOG_PREFIX}.logging] Failed to initialize log file: {e}")

    @classmethod
    def shutdown(cls) -> None:
        """Close the log file and return to the unconfigured state."""
        with cls._lock:
            if cls._file is not None:
                cls._file.close()
                cls._file = None
            cls._initialized = False
            cls._debug_enabled = False
            cls._verbose = False
            cls._log_dir = None
            cls._stream = None

    @classmethod
    def _to_terminal(cls, text: str) -> None:
        stream = cls._stream if cls._stream is not None else sys.stderr
        try:
            stream.write(text + "\n")
            stream.flush()
        except (OSError, ValueError):
            pass

    @classmethod
    def _to_file(cls, level: str, text: str) -> None:
        if not cls._debug_enabled:
            return
        stamp = dt.now().strftime(LOG_TIMESTAMP_FORMAT)[:LOG_TIMESTAMP_TRIM]
        with cls._lock:
            if cls._file is None:
                return
            try:
                cls._file.write(f"{stamp} [{level:5}] {text}\n")
            except OSError:
                pass

    def _render(self, message: str, context: Dict[str, Any]) -> str:
        head = f"[{LOG_PREFIX}.{self.module}] {message}"
        if not context:
            return head
        pairs = []
        for key, value in context.items():
            text = str(value)
            if key != "trace" and len(text) > LOG_MAX_VALUE_LENGTH:
                text = text[:LOG_MAX_VALUE_LENGTH] + "..."
            pairs.append(f"{key}={text}")
        return f"{head} | {', '.join(pairs)}"

    def _emit(self, level: str, message: str, context: Dict[str, Any], terminal: bool) -> None:
        if "event" not in context:
            context["event"] = f"misc.{level.lower()}"
            context["_missing_event"] = True
        line = self._render(message, context)
        if terminal:
            StructuredLogger._to_terminal(line)
        StructuredLogger._to_file(level, line)

    def debug(self, message: str, **context: Any) -> None:
        """File only, and only when debug logging is on."""
        if StructuredLogger._debug_enabled:
            StructuredLogger._to_file("DEBUG", self._render(message, context))

    def info(self, message: str, **context: Any) -> None:
        self._emit("INFO", message, context, terminal=StructuredLogger._verbose)

    def warning(self, message: str, **context: Any) -> None:
        self._emit("WARN", message, context, terminal=True)

    def error(self, message: str, **context: Any) -> None:
        self._emit("ERROR", message, context, terminal=True)

    def exception(self, message: str, **context: Any) -> None:
        """error() plus the traceback of the exception being handled."""
        context["trace"] = traceback.format_exc()
        self.error(message, **context)


def get_logger(module_name: str) -> StructuredLogger:
    """
    Logger for one module. The first call configures quiet defaults, so
    library use without the CLI needs no setup.
    """
    if not StructuredLogger._initialized:
        StructuredLogger.initialize()
    return StructuredLogger(module_name)


class TimedOperation:
    """Phase marks inside log_timing(); each mark records time since the previous one."""

    def __init__(self) -> None:
        self._last = time.perf_counter()
        self.phases: Dict[str, int] = {}

    def mark(self, phase_name: str) -> None:
        now = time.perf_counter()
        self.phases[f"{phase_name}_ms"] = int((now - self._last) * 1000)
        self._last = now


@contextmanager
def log_timing(logger: StructuredLogger, operation: str, **context: Any) -> Iterator[TimedOperation]:
    """
    Time a block and log '<operation> completed' at DEBUG with duration_ms,
    any phase marks and the given context. Logs even when the block raises.

    Example:
        with log_timing(log, "catalog_build", rows=31) as timer:
            entries = build()
            timer.mark("construct")
    """
    start = time.perf_counter()
    timer = TimedOperation()
    try:
        yield timer
    finally:
        logger.debug(
            f"{operation} completed",
            duration_ms=int((time.perf_counter() - start) * 1000),
            **timer.phases,
            **context,
        )


# =============================================================================
# Text helpers
# =============================================================================

_ORDER_SEPARATORS = re.compile(r"[x,*×\s]+", re.IGNORECASE)
_UNSAFE_FILENAME_CHARS = re.compile(r"[^A-Za-z0-9_.()\-]")


def format_orders(orders: Iterable[int]) -> str:
    """(6, 2, 2) -> '6x2x2'."""
    return "x".join(str(s) for s in orders)


def parse_orders(text: str) -> Tuple[int, ...]:
    """
    Factor orders written as '6x2x2', '6,2,2', '6*2*2' or '6 2 2'.

    Raises:
        ValueError: For an empty list or a token that is not an integer.
    """
    tokens = [token for token in _ORDER_SEPARATORS.split(text) if token]
    if not tokens:
        raise ValueError("empty factor list")
    return tuple(int(token) for token in tokens)


def format_count(value: int) -> str:
    """1728 -> '1,728'."""
    return f"{value:,}"


def sanitize_filename(dirty_string: str) -> str:
    """Lowercase, spaces to underscores, anything outside [A-Za-z0-9_.()-] dropped."""
    return _UNSAFE_FILENAME_CHARS.sub("", dirty_string.strip().replace(" ", "_")).lower()
