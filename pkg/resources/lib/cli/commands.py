#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
#  Copyright (C) 2024-2026 Rouzax
#
#  SPDX-License-Identifier: GPL-3.0-or-later
#  See LICENSE.txt for more information.
#

"""
OArrays Command Implementations.

Each command is a thin wrapper around one library call: it takes the parsed
arguments and resolved settings, writes data to `out` and returns an exit
code. Errors are raised and mapped to exit codes by cli.main.

Logging:
    Module: cli
    Events:
        - cli.construct (INFO): Array constructed and checked
        - cli.verify (INFO): Array file verified
        - cli.catalog (INFO): Catalog written
        - cli.search (INFO): Search or uniqueness probe finished
"""
from __future__ import annotations

import argparse
import json
from typing import Any, Dict, List, Optional, Sequence, TextIO

from resources.lib.constants import (
    EXIT_INCONCLUSIVE,
    EXIT_OK,
    EXIT_VERIFY_FAIL,
    SEARCH_STATUS_BUDGET,
    UNIQUENESS_INCONCLUSIVE,
)
from resources.lib.data.array_format import (
    array_to_json,
    format_array,
    provenance,
    provenance_footer,
    read_array,
    write_array,
)
from resources.lib.data.catalog_report import entry_to_json, render_catalog, write_catalog
from resources.lib.design.constructions import (
    build_catalog,
    catalog_row_for,
    construct_from_recipe,
    select_recipe,
)
from resources.lib.design.groups import FiniteGroup, group_from_tag
from resources.lib.design.numtheory import (
    FactorSpec,
    bound_profile,
    witness_subsets_for_d,
)
from resources.lib.design.oarray import (
    ConjugacyReport,
    OrthogonalArray,
    StrengthReport,
    divisibility_check,
    max_strength,
    verify_conjugacy,
    verify_strength,
)
from resources.lib.design.search import search_arrays, uniqueness_probe
from resources.lib.errors import UsageError
from resources.lib.settings import ToolSettings
from resources.lib.utils import StructuredLogger, format_count, get_logger, parse_orders

# Module-level logger (initialized lazily)
_log: Optional[StructuredLogger] = None


def _get_log() -> StructuredLogger:
    """Get or create the module logger."""
    global _log
    if _log is None:
        _log = get_logger('cli')
    return _log


def spec_from_args(tokens: Sequence[str]) -> FactorSpec:
    """
    Factor orders from positional arguments ('6 2 2' or '6x2x2').

    Raises:
        UsageError: For tokens that are not integers.
    """
    try:
        orders = parse_orders(" ".join(tokens))
    except ValueError as e:
        raise UsageError(f"factor orders must be integers: {e}") from None
    return FactorSpec(orders)


def _subset_label(subset: Sequence[int]) -> str:
    return "{" + ",".join(str(i + 1) for i in subset) + "}"


def _emit_json(out: TextIO, payload: Dict[str, Any]) -> None:
    out.write(json.dumps(payload, indent=2) + "\n")


# =============================================================================
# bounds
# =============================================================================

def cmd_bounds(args: argparse.Namespace, settings: ToolSettings, out: TextIO) -> int:
    spec = spec_from_args(args.orders)
    profile = bound_profile(spec)
    witnesses = witness_subsets_for_d(spec)

    if args.json:
        _emit_json(out, {
            "spec": list(spec.orders),
            "L": list(profile.levels),
            "d": profile.d,
            "witness_subsets": [[i + 1 for i in s] for s in witnesses],
            "proper_fraction_feasible": [profile.feasible(t) for t in range(1, spec.k + 1)],
        })
        return EXIT_OK

    out.write(f"spec {spec.label} (k={spec.k}, complete size {format_count(spec.complete_size)})\n")
    for t in range(1, spec.k + 1):
        verdict = (
            "proper fraction possible" if profile.feasible(t)
            else f"no proper fraction has strength {t}"
        )
        out.write(f"L_{t} = {format_count(profile.level(t))}  ({verdict})\n")
    out.write(f"d = {profile.d}\n")
    out.write("witness subsets: " + " ".join(_subset_label(s) for s in witnesses) + "\n")
    return EXIT_OK


# =============================================================================
# construct
# =============================================================================

def _strength_line(report: StrengthReport, array: OrthogonalArray) -> str:
    if report.holds:
        return "holds"
    assert report.witness is not None
    return "fails; " + report.witness.describe(array)


def cmd_construct(args: argparse.Namespace, settings: ToolSettings, out: TextIO) -> int:
    spec = spec_from_args(args.orders)
    recipe = select_recipe(spec, layout=args.layout, first_ordering=args.first_ordering)
    array = construct_from_recipe(recipe, capacity_limit=settings.capacity_limit)

    t = spec.k - 1
    strength = verify_strength(array, t)
    conjugacy = verify_conjugacy(array, recipe.groups)
    row = catalog_row_for(spec)
    info = provenance(
        case=recipe.case,
        layout=recipe.layout,
        ordering=recipe.first_ordering.label,
        strength=f"{t} {_strength_line(strength, array)}",
        max_strength=max_strength(array),
        conjugacy="holds" if conjugacy.holds else "fails; " + _conjugacy_detail(conjugacy, recipe.groups),
        fraction=str(array.fraction()),
        catalog=f"{row.label} N={row.array_size} ({row.fraction})" if row is not None else "none",
    )
    if recipe.note:
        info["note"] = recipe.note
    footer = provenance_footer(info)

    if args.output:
        write_array(args.output, array, footer=footer, info=info if args.json else None)
        out.write(f"wrote {args.output} ({spec.label}, N={array.N})\n")
    elif args.json:
        _emit_json(out, array_to_json(array, info))
    else:
        out.write(format_array(array, footer))

    ok = strength.holds and conjugacy.holds
    _get_log().info("Array constructed", event="cli.construct", spec=spec.label,
                    N=array.N, case=recipe.case, layout=recipe.layout, verified=ok)
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


def _conjugacy_detail(report: ConjugacyReport, groups: Sequence[FiniteGroup]) -> str:
    return report.witness.describe(groups) if report.witness is not None else "no witness"


# =============================================================================
# verify
# =============================================================================

def _resolve_groups(array: OrthogonalArray, tags: Optional[List[str]]) -> Optional[List[FiniteGroup]]:
    """None when no conjugacy check was asked for; [] (flag without tags) uses the file's tags."""
    if tags is None:
        return None
    if not tags:
        if array.groups is None:
            raise UsageError("the file carries no group tags; pass them with --groups")
        return list(array.groups)
    flat = [tag for token in tags for tag in token.replace(",", " ").split()]
    if len(flat) != array.k:
        raise UsageError(f"expected {array.k} group tags, got {len(flat)}")
    return [group_from_tag(tag) for tag in flat]


def cmd_verify(args: argparse.Namespace, settings: ToolSettings, out: TextIO) -> int:
    array = read_array(args.file)
    t = args.strength
    report = verify_strength(array, t)
    top = max_strength(array)
    groups = _resolve_groups(array, args.groups)
    conjugacy = verify_conjugacy(array, groups) if groups is not None else None
    if report.holds:
        divisibility_check(array, t, report)

    ok = report.holds and (conjugacy is None or conjugacy.holds)
    _get_log().info("Array verified", event="cli.verify", path=args.file, spec=array.spec.label,
                    N=array.N, t=t, strength=report.holds,
                    conjugacy=None if conjugacy is None else conjugacy.holds)

    if args.json:
        payload: Dict[str, Any] = {
            "spec": list(array.spec.orders),
            "N": array.N,
            "strength": {
                "t": t,
                "holds": report.holds,
                "lambdas": {_subset_label(s): lam for s, lam in report.lambdas.items()},
                "witness": report.witness.describe(array) if report.witness else None,
            },
            "max_strength": top,
        }
        if conjugacy is not None and groups is not None:
            payload["conjugacy"] = {
                "groups": [g.name for g in groups],
                "holds": conjugacy.holds,
                "classes_checked": conjugacy.classes_checked,
                "witness": conjugacy.witness.describe(groups) if conjugacy.witness else None,
            }
        _emit_json(out, payload)
        return EXIT_OK if ok else EXIT_VERIFY_FAIL

    out.write(f"array {array.spec.label}, N={array.N}\n")
    out.write(f"strength {t}: {_strength_line(report, array)}\n")
    if report.holds:
        lambdas = " ".join(f"{_subset_label(s)}={lam}" for s, lam in report.lambdas.items())
        out.write(f"lambda: {lambdas}\n")
    out.write(f"max strength: {top}\n")
    if conjugacy is not None and groups is not None:
        names = " ".join(g.name for g in groups)
        if conjugacy.holds:
            out.write(f"conjugacy ({names}): holds, {conjugacy.classes_checked} classes\n")
        else:
            out.write(f"conjugacy ({names}): fails; {_conjugacy_detail(conjugacy, groups)}\n")
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


# =============================================================================
# catalog
# =============================================================================

def cmd_catalog(args: argparse.Namespace, settings: ToolSettings, out: TextIO) -> int:
    entries = build_catalog(
        layout=args.layout,
        workers=settings.workers,
        strict=False,
        capacity_limit=settings.capacity_limit,
    )
    if args.output:
        written = write_catalog(entries, args.output)
        _get_log().info("Catalog written", event="cli.catalog", path=args.output, files=len(written))

    if args.json:
        _emit_json(out, {"provenance": provenance(), "rows": [entry_to_json(e) for e in entries]})
    else:
        out.write(render_catalog(entries))
    return EXIT_OK if all(e.ok for e in entries) else EXIT_VERIFY_FAIL


# =============================================================================
# search
# =============================================================================

def cmd_search(args: argparse.Namespace, settings: ToolSettings, out: TextIO) -> int:
    spec = spec_from_args(args.orders)
    if args.strength is None:
        raise UsageError("search needs --strength")

    if args.uniqueness:
        probe = uniqueness_probe(spec, args.strength, budget=settings.search_budget,
                                 capacity_limit=settings.capacity_limit)
        if probe.witness is not None:
            out.write(format_array(probe.witness) + "\n")
        out.write(f"uniqueness of {spec.label} at strength {args.strength}: {probe.verdict}\n")
        out.write(probe.search.summary() + "\n")
        _get_log().info("Uniqueness probe finished", event="cli.search", spec=spec.label,
                        t=args.strength, verdict=probe.verdict, nodes=probe.search.nodes)
        return EXIT_INCONCLUSIVE if probe.verdict == UNIQUENESS_INCONCLUSIVE else EXIT_OK

    if args.size is None:
        raise UsageError("search needs --size (or --uniqueness)")
    result = search_arrays(
        spec,
        args.size,
        args.strength,
        limit=settings.result_limit,
        exclude_complete=args.exclude_complete,
        budget=settings.search_budget,
        capacity_limit=settings.capacity_limit,
    )
    if args.json:
        _emit_json(out, {
            "spec": list(spec.orders),
            "N": result.N,
            "t": result.t,
            "status": result.status,
            "nodes": result.nodes,
            "note": result.note,
            "arrays": [array.label_rows() for array in result.arrays],
        })
    else:
        for array in result.arrays:
            out.write(format_array(array) + "\n")
        out.write(result.summary() + "\n")
    _get_log().info("Search finished", event="cli.search", spec=spec.label, N=result.N,
                    t=result.t, found=len(result.arrays), status=result.status)
    return EXIT_INCONCLUSIVE if result.status == SEARCH_STATUS_BUDGET else EXIT_OK
