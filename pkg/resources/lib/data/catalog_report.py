#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
#  Copyright (C) 2024-2026 Rouzax
#
#  SPDX-License-Identifier: GPL-3.0-or-later
#  See LICENSE.txt for more information.
#

"""
Rendering and writing the construction catalog.

The summary table mirrors the published one: design, complete size, array
size and fraction, plus the checks run on each array.
"""
from __future__ import annotations

import json
import os
from typing import Any, Dict, List, Sequence

from resources.lib.constants import (
    ARRAY_FILE_SUFFIX,
    CATALOG_JSON_FILENAME,
    CATALOG_SUMMARY_FILENAME,
)
from resources.lib.data.array_format import provenance, provenance_footer, write_array, write_text
from resources.lib.design.constructions import CatalogEntry
from resources.lib.utils import format_count, sanitize_filename

_HEADERS = ("Design", "Complete", "Array", "Fraction", "Strength", "Conjugacy", "Note")


def _cells(entry: CatalogEntry) -> List[str]:
    k = entry.array.k
    strength = f"{entry.max_strength}" if entry.strength.holds else f"<{k - 1}"
    notes = [entry.row.note] if entry.row.note else []
    if entry.repeats:
        notes.append("repeats")
    if entry.mismatches:
        notes.append("MISMATCH")
    return [
        entry.row.label,
        format_count(entry.array.spec.complete_size),
        format_count(entry.array.N),
        str(entry.fraction),
        strength,
        "yes" if entry.conjugacy.holds else "no",
        " ".join(notes),
    ]


def render_catalog(entries: Sequence[CatalogEntry]) -> str:
    """Fixed-column text table, one line per entry, catalog order."""
    rows = [list(_HEADERS)] + [_cells(e) for e in entries]
    widths = [max(len(row[i]) for row in rows) for i in range(len(_HEADERS))]
    lines = []
    for n, row in enumerate(rows):
        # left-align the design and note columns, right-align the numbers
        parts = [
            cell.ljust(width) if i in (0, len(row) - 1) else cell.rjust(width)
            for i, (cell, width) in enumerate(zip(row, widths))
        ]
        lines.append("  ".join(parts).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def entry_to_json(entry: CatalogEntry) -> Dict[str, Any]:
    return {
        "design": entry.row.label,
        "spec": list(entry.array.spec.orders),
        "case": entry.recipe.case,
        "v": list(entry.recipe.v),
        "complete_size": entry.array.spec.complete_size,
        "array_size": entry.array.N,
        "fraction": str(entry.fraction),
        "strength_holds": entry.strength.holds,
        "max_strength": entry.max_strength,
        "conjugacy_holds": entry.conjugacy.holds,
        "proper_fraction": entry.proper,
        "repeats": entry.repeats,
        "note": entry.row.note,
        "mismatches": list(entry.mismatches),
    }


def entry_footer(entry: CatalogEntry) -> List[str]:
    """Verification comment lines written under each catalog array."""
    info = entry_provenance(entry)
    return provenance_footer(info)


def entry_provenance(entry: CatalogEntry) -> Dict[str, Any]:
    k = entry.array.k
    return provenance(
        case=entry.recipe.case,
        layout=entry.recipe.layout,
        strength=f"{k - 1} {'holds' if entry.strength.holds else 'fails'} (max {entry.max_strength})",
        conjugacy="holds" if entry.conjugacy.holds else "fails",
        fraction=str(entry.fraction),
    )


def array_filename(entry: CatalogEntry) -> str:
    return sanitize_filename(entry.row.label) + ARRAY_FILE_SUFFIX


def write_catalog(entries: Sequence[CatalogEntry], out_dir: str) -> List[str]:
    """
    Write one array file (plus JSON mirror) per entry and the summary files.

    Returns:
        Paths written, array files first, summary last.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for entry in entries:
        path = os.path.join(out_dir, array_filename(entry))
        write_array(path, entry.array, footer=entry_footer(entry), info=entry_provenance(entry))
        written.append(path)

    summary_path = os.path.join(out_dir, CATALOG_SUMMARY_FILENAME)
    write_text(summary_path, render_catalog(entries))
    json_path = os.path.join(out_dir, CATALOG_JSON_FILENAME)
    payload = {"provenance": provenance(), "rows": [entry_to_json(e) for e in entries]}
    write_text(json_path, json.dumps(payload, indent=2) + "\n")
    written.extend([summary_path, json_path])
    return written
