#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
#  Copyright (C) 2024-2026 Rouzax
#
#  SPDX-License-Identifier: GPL-3.0-or-later
#  See LICENSE.txt for more information.
#

"""
Exception hierarchy for OArrays.

Every error raised on purpose by the library derives from OArrayError, so
callers (and the CLI) can catch one type. The CLI maps each class to an
exit code; see resources/lib/cli/main.py.
"""
from __future__ import annotations

from typing import Optional


class OArrayError(Exception):
    """Base class for all library errors."""


class UsageError(OArrayError, ValueError):
    """A precondition or argument was violated by the caller."""


class CapacityError(UsageError):
    """A requested object would exceed the configured size limit."""

    def __init__(self, what: str, size: int, limit: int) -> None:
        super().__init__(f"{what} needs {size:,} entries, limit is {limit:,}")
        self.what = what
        self.size = size
        self.limit = limit


class UnsupportedCaseError(OArrayError):
    """
    No construction recipe applies to the given factor orders.

    Attributes:
        condition: The precondition that failed, in words.
        hint: Optional suggestion (for example a reordering of the factors).
    """

    def __init__(self, condition: str, hint: Optional[str] = None) -> None:
        message = condition if hint is None else f"{condition} (hint: {hint})"
        super().__init__(message)
        self.condition = condition
        self.hint = hint


class ArrayParseError(OArrayError):
    """Malformed array text. Line and column are 1-based."""

    def __init__(self, message: str, line: int, column: int = 0) -> None:
        location = f"line {line}" if column <= 0 else f"line {line}, column {column}"
        super().__init__(f"{location}: {message}")
        self.line = line
        self.column = column
        self.reason = message


class CatalogMismatchError(OArrayError):
    """A catalog row did not come out as published."""

    def __init__(self, row_label: str, detail: str) -> None:
        super().__init__(f"catalog row {row_label}: {detail}")
        self.row_label = row_label
        self.detail = detail


class InvariantViolation(OArrayError, AssertionError):
    """An arithmetic invariant that always holds was found broken (a bug)."""
