#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
#  Copyright (C) 2024-2026 Rouzax
#
#  SPDX-License-Identifier: GPL-3.0-or-later
#  See LICENSE.txt for more information.
#

"""
Array text format and its JSON mirror.

Text format (one array per file, '#' starts a comment anywhere on a line):

    4 24
    S3 Z2 Z2 Z2
    e x y a b c e x y a b c ...
    0 0 0 0 0 0 0 0 0 0 0 0 ...
    ...
    # provenance / verification footer

Line 1 is "k N", line 2 holds one group tag per factor (Zn, S3, S3b, D4, D5,
Dn), then k rows of N labels. Blank lines are ignored. Errors report the
1-based line and column of the offending token.

JSON mirror: {"spec": [...], "tags": [...], "rows": [[...]], "provenance": {...}}.

Logging:
    Module: array_format
    Events:
        - array.write (DEBUG): File written
        - array.write_fail (ERROR): Array file could not be written
"""
from __future__ import annotations

import json
import os
import re
from typing import Any, Dict, Iterable, List, Optional, Tuple

from resources.lib.constants import JSON_FILE_SUFFIX, TOOL_NAME, TOOL_VERSION
from resources.lib.design.groups import FiniteGroup, group_from_tag
from resources.lib.design.numtheory import FactorSpec
from resources.lib.design.oarray import OrthogonalArray
from resources.lib.errors import ArrayParseError, UsageError
from resources.lib.utils import StructuredLogger, get_logger

# Module-level logger (initialized lazily)
_log: Optional[StructuredLogger] = None


def _get_log() -> StructuredLogger:
    """Get or create the module logger."""
    global _log
    if _log is None:
        _log = get_logger('array_format')
    return _log


_TOKEN = re.compile(r"\S+")

Token = Tuple[str, int]  # (text, 1-based column)


def _content_lines(text: str) -> List[Tuple[int, List[Token]]]:
    """Non-blank lines with comments stripped, as (line number, tokens)."""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        tokens = [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(content)]
        if tokens:
            lines.append((number, tokens))
    return lines


def _parse_int(token: Token, line: int, what: str) -> int:
    text, column = token
    try:
        value = int(text)
    except ValueError:
        raise ArrayParseError(f"{what} must be an integer, got {text!r}", line, column) from None
    if value < 1:
        raise ArrayParseError(f"{what} must be positive, got {value}", line, column)
    return value


def parse_array(text: str) -> OrthogonalArray:
    """
    Parse one array from the text format.

    Raises:
        ArrayParseError: With line/column for wrong counts, bad tags or
            unknown labels.
    """
    lines = _content_lines(text)
    if not lines:
        raise ArrayParseError("empty input, expected 'k N'", 1)

    number, header = lines[0]
    if len(header) != 2:
        column = header[2][1] if len(header) > 2 else header[-1][1]
        raise ArrayParseError(f"header must be 'k N', found {len(header)} value(s)", number, column)
    k = _parse_int(header[0], number, "k")
    N = _parse_int(header[1], number, "N")

    if len(lines) < 2:
        raise ArrayParseError("missing group tag line", number + 1)
    number, tag_tokens = lines[1]
    if len(tag_tokens) != k:
        column = tag_tokens[k][1] if len(tag_tokens) > k else 0
        raise ArrayParseError(f"expected {k} group tags, found {len(tag_tokens)}", number, column)
    groups: List[FiniteGroup] = []
    for text_tag, column in tag_tokens:
        try:
            groups.append(group_from_tag(text_tag))
        except UsageError as e:
            raise ArrayParseError(str(e), number, column) from None

    body = lines[2:]
    if len(body) < k:
        last_line = body[-1][0] if body else number
        raise ArrayParseError(f"expected {k} rows, found {len(body)}", last_line + 1)
    if len(body) > k:
        extra_line, extra = body[k]
        raise ArrayParseError(f"unexpected content after {k} rows", extra_line, extra[0][1])

    matrix: List[List[int]] = []
    for i, ((row_line, tokens), group) in enumerate(zip(body, groups), start=1):
        if len(tokens) != N:
            column = tokens[N][1] if len(tokens) > N else 0
            raise ArrayParseError(
                f"row {i} has {len(tokens)} entries, expected {N}", row_line, column
            )
        indices = []
        for label, column in tokens:
            if not group.has_label(label):
                raise ArrayParseError(
                    f"unknown symbol {label!r} for {group.tag} in row {i}", row_line, column
                )
            indices.append(group.index_of(label))
        matrix.append(indices)

    spec = FactorSpec(tuple(g.order for g in groups))
    return OrthogonalArray(spec, matrix, groups=groups)


def format_array(array: OrthogonalArray, footer: Iterable[str] = ()) -> str:
    """Text format with optional '# ' footer lines. Ends with a newline."""
    lines = [f"{array.k} {array.N}", " ".join(array.tags)]
    lines.extend(" ".join(row) for row in array.label_rows())
    lines.extend(f"# {entry}" if entry else "#" for entry in footer)
    return "\n".join(lines) + "\n"


def provenance(**extra: Any) -> Dict[str, Any]:
    """Provenance block; deterministic (no timestamps)."""
    block: Dict[str, Any] = {"tool": TOOL_NAME, "version": TOOL_VERSION}
    block.update(extra)
    return block


def provenance_footer(info: Dict[str, Any]) -> List[str]:
    """Provenance as 'key: value' comment lines, tool line first."""
    lines = [f"{info.get('tool', TOOL_NAME)} {info.get('version', TOOL_VERSION)}"]
    lines.extend(f"{key}: {value}" for key, value in info.items() if key not in ("tool", "version"))
    return lines


def array_to_json(array: OrthogonalArray, info: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    return {
        "spec": list(array.spec.orders),
        "tags": list(array.tags),
        "rows": array.label_rows(),
        "provenance": info if info is not None else provenance(),
    }


def array_from_json(data: Dict[str, Any]) -> OrthogonalArray:
    """
    Rebuild an array from its JSON mirror.

    Raises:
        UsageError: For missing fields or a spec that disagrees with the tags.
    """
    try:
        tags = [str(t) for t in data["tags"]]
        rows = data["rows"]
        orders = tuple(int(s) for s in data["spec"])
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"malformed array JSON: {e}") from None
    if not isinstance(rows, list) or not all(
        isinstance(row, list) and all(isinstance(x, (str, int)) for x in row) for row in rows
    ):
        raise UsageError("malformed array JSON: rows must be a list of label lists")
    groups = [group_from_tag(tag) for tag in tags]
    if orders != tuple(g.order for g in groups):
        raise UsageError(f"spec {list(orders)} does not match tags {' '.join(tags)}")
    if len(rows) != len(groups):
        raise UsageError(f"expected {len(groups)} rows, got {len(rows)}")
    return OrthogonalArray.from_labels(
        [[str(x) for x in row] for row in rows],
        [g.elements for g in groups],
        groups=groups,
    )


def read_array(path: str) -> OrthogonalArray:
    """Read a text-format file; a .json suffix reads the mirror instead."""
    with open(path, "rb") as f:
        raw = f.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        line_start = raw.rfind(b"\n", 0, e.start) + 1
        raise ArrayParseError(
            f"not UTF-8 text (byte 0x{raw[e.start]:02x})",
            raw.count(b"\n", 0, e.start) + 1,
            e.start - line_start + 1,
        ) from None
    if path.endswith(JSON_FILE_SUFFIX):
        try:
            return array_from_json(json.loads(text))
        except json.JSONDecodeError as e:
            raise ArrayParseError(e.msg, e.lineno, e.colno) from None
    return parse_array(text)


def write_text(path: str, text: str) -> None:
    """Write a file, creating parent directories."""
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError:
        _get_log().exception("Array file write failed", event="array.write_fail", path=path)
        raise
    _get_log().debug("File written", event="array.write", path=path, size=len(text))


def write_array(
    path: str,
    array: OrthogonalArray,
    footer: Iterable[str] = (),
    info: Optional[Dict[str, Any]] = None,
) -> None:
    """Write the text format to path and, when info is given, the JSON mirror next to it."""
    write_text(path, format_array(array, footer))
    if info is not None:
        stem, _ = os.path.splitext(path)
        write_text(stem + JSON_FILE_SUFFIX, json.dumps(array_to_json(array, info), indent=2) + "\n")
