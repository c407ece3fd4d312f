#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
#  Copyright (C) 2024-2026 Rouzax
#
#  SPDX-License-Identifier: GPL-3.0-or-later
#  See LICENSE.txt for more information.
#

"""
Proper-fraction constructions of strength k-1 over S3, Dih4 and Dih5.

Factor 1 carries a nonabelian group (S3 for 6 levels, Dih4 for 8, Dih5 for
10); every other factor is Z_s. Which recipe applies is decided by the gcd
of all orders:

    gcd 2 or 4   N = L_{k-1}       (1/2 or 1/4 fraction)
    gcd 6        N = 3 L_{k-1}     (6^k only, 1/2 fraction)
    gcd 3        N = 2 L_{k-1}     (6 x 3^{k-1} only, 2/3 of the complete size)

Rows are filled from repetition counts v_1 = N/s_1 and v_j = N/(s_2...s_j):

    row 1      group elements in order, tiled (gcd 3: forward then reverse)
    rows 2..k-1 each element of Z_{s_j} repeated v_j times, tiled
    row k      passes of s_k * v_k entries, each pass permuting the blocks

Two layouts exist for row k. LITERAL alternates forward and reversed passes
(gcd 3: shifts cyclically by the pass number). BALANCED drives the same
permutations by the digit sum of the middle rows over the pass, and for
quarter fractions rotates instead of reflecting. Both agree for three
factors; only BALANCED reaches strength k-1 for four or more.

Logging:
    Module: constructions
    Events:
        - construct.unverified (WARNING): Shape outside the published catalog
        - catalog.row (INFO): One catalog row built and checked
        - catalog.mismatch (ERROR): A catalog row differs from the published one
        - catalog.done (INFO): Catalog finished
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from resources.lib.constants import (
    CASE_GCD3,
    CASE_GCD6,
    CASE_GCD24,
    CASE_SIZE_MULTIPLIER,
    CATALOG_ORDERS,
    CATALOG_ROWS,
    DEFAULT_CAPACITY_LIMIT,
    FIRST_FACTOR_GROUP_TAGS,
    LAYOUT_BALANCED,
    LAYOUT_LITERAL,
    ORDERING_FIRST,
    ORDERING_SECOND,
    TAG_S3,
    TAG_S3_SECOND,
    UNVERIFIED_NOTE,
    CatalogRow,
)
from resources.lib.design.groups import (
    FiniteGroup,
    GroupOrdering,
    group_from_tag,
    make_cyclic,
    s3_ordering,
)
from resources.lib.design.numtheory import FactorSpec, compute_L, gcd_set
from resources.lib.design.oarray import (
    ConjugacyReport,
    OrthogonalArray,
    StrengthReport,
    has_repeats,
    is_proper_fraction,
    max_strength,
    verify_conjugacy,
    verify_strength,
)
from resources.lib.errors import (
    CapacityError,
    CatalogMismatchError,
    InvariantViolation,
    UnsupportedCaseError,
    UsageError,
)
from resources.lib.utils import StructuredLogger, format_orders, get_logger, log_timing

# Module-level logger (initialized lazily)
_log: Optional[StructuredLogger] = None


def _get_log() -> StructuredLogger:
    """Get or create the module logger."""
    global _log
    if _log is None:
        _log = get_logger('constructions')
    return _log


LAYOUTS = (LAYOUT_BALANCED, LAYOUT_LITERAL)


@dataclass(frozen=True)
class ConstructionRecipe:
    """
    Everything needed to fill the rows for one spec.

    Attributes:
        spec: Factor orders, s_1 in {6, 8, 10}.
        case: CASE_GCD24, CASE_GCD6 or CASE_GCD3.
        v: Repetition counts v_1..v_k.
        N: Number of runs.
        first_ordering: Element order used for factor 1.
        groups: G_1, Z_{s_2}, ..., Z_{s_k}.
        layout: LAYOUT_BALANCED or LAYOUT_LITERAL for the last row.
        in_catalog: False for shapes outside the published catalog.
    """
    spec: FactorSpec
    case: str
    v: Tuple[int, ...]
    N: int
    first_ordering: GroupOrdering
    groups: Tuple[FiniteGroup, ...]
    layout: str = LAYOUT_BALANCED
    in_catalog: bool = True

    @property
    def pass_length(self) -> int:
        """Entries in one pass of the last row, s_k * v_k."""
        return self.spec.orders[-1] * self.v[-1]

    @property
    def note(self) -> str:
        return "" if self.in_catalog else UNVERIFIED_NOTE


def _first_group(s1: int, ordering: Optional[str], case: str) -> Tuple[GroupOrdering, FiniteGroup]:
    tag = FIRST_FACTOR_GROUP_TAGS[s1]
    if tag == TAG_S3:
        which = ordering or (ORDERING_SECOND if case == CASE_GCD3 else ORDERING_FIRST)
        chosen = s3_ordering(which)
        group = chosen.apply(tag=TAG_S3_SECOND) if which == ORDERING_SECOND else chosen.group
        return chosen, group
    if ordering not in (None, ORDERING_FIRST):
        raise UsageError(f"element ordering override only applies to S3, not a {s1}-level first factor")
    group = group_from_tag(tag)
    return GroupOrdering(group, tuple(range(group.order)), ORDERING_FIRST), group


def _nonabelian_hint(spec: FactorSpec) -> Optional[str]:
    for position, s in enumerate(spec.orders):
        if position and s in FIRST_FACTOR_GROUP_TAGS:
            reordered = (s,) + spec.orders[:position] + spec.orders[position + 1:]
            return f"list the {s}-level factor first, e.g. {format_orders(reordered)}"
    return None


def select_recipe(
    spec: FactorSpec,
    layout: str = LAYOUT_BALANCED,
    first_ordering: Optional[str] = None,
) -> ConstructionRecipe:
    """
    Pick the construction case for spec and compute v_1..v_k.

    Args:
        spec: Factor orders; factor 1 must have 6, 8 or 10 levels.
        layout: Last-row layout, balanced (default) or literal.
        first_ordering: 'first' or 'second' to override the S3 ordering.

    Raises:
        UnsupportedCaseError: Naming the failed condition.
        UsageError: For an unknown layout or misplaced ordering override.
    """
    if layout not in LAYOUTS:
        raise UsageError(f"unknown layout {layout!r} (use {' or '.join(LAYOUTS)})")
    if spec.k < 2:
        raise UnsupportedCaseError("constructions need at least two factors")
    s1 = spec.orders[0]
    if s1 not in FIRST_FACTOR_GROUP_TAGS:
        raise UnsupportedCaseError(
            f"first factor must have 6, 8 or 10 levels, got {s1}", _nonabelian_hint(spec)
        )

    g = gcd_set(spec.orders)
    rest = spec.orders[1:]
    if g in (2, 4):
        case = CASE_GCD24
    elif g == 6:
        if any(s != 6 for s in rest):
            raise UnsupportedCaseError(f"gcd 6 is only handled for 6^k, got {spec.label}")
        case = CASE_GCD6
    elif g == 3:
        if s1 != 6 or any(s != 3 for s in rest):
            raise UnsupportedCaseError(f"gcd 3 is only handled for 6 x 3^(k-1), got {spec.label}")
        case = CASE_GCD3
    else:
        raise UnsupportedCaseError(
            f"gcd of the orders is {g}; constructions need gcd 2, 3, 4 or 6"
        )

    N = CASE_SIZE_MULTIPLIER[case] * compute_L(spec, spec.k - 1)
    if N % s1:
        raise UnsupportedCaseError(f"v_1 = {N}/{s1} is not an integer")
    v = [N // s1]
    running = 1
    for j, s in enumerate(rest, start=2):
        running *= s
        if N % running:
            raise UnsupportedCaseError(f"v_{j} = {N}/{running} is not an integer")
        v.append(N // running)

    ordering, first = _first_group(s1, first_ordering, case)
    groups = (first,) + tuple(make_cyclic(s) for s in rest)
    in_catalog = spec.orders in CATALOG_ORDERS
    return ConstructionRecipe(
        spec=spec,
        case=case,
        v=tuple(v),
        N=N,
        first_ordering=ordering,
        groups=groups,
        layout=layout,
        in_catalog=in_catalog,
    )


# =============================================================================
# Row fills (symbol indices)
# =============================================================================

def fill_row1(recipe: ConstructionRecipe) -> np.ndarray:
    """G_1 in its ordering, repeated v_1 times; gcd 3 alternates forward and reverse."""
    s1 = recipe.spec.orders[0]
    if recipe.case == CASE_GCD3:
        forward = np.arange(s1)
        return np.resize(np.concatenate([forward, forward[::-1]]), recipe.N)
    return np.tile(np.arange(s1), recipe.v[0])


def fill_middle_row(recipe: ConstructionRecipe, j: int) -> np.ndarray:
    """Row j (2..k-1): each element of Z_{s_j} v_j times in a row, block tiled to N."""
    k = recipe.spec.k
    if not 2 <= j <= k - 1:
        raise UsageError(f"middle rows are 2..{k - 1}, got {j}")
    s = recipe.spec.orders[j - 1]
    return np.resize(np.repeat(np.arange(s), recipe.v[j - 1]), recipe.N)


def _pass_shift(recipe: ConstructionRecipe, middle: Sequence[np.ndarray], m: int) -> Tuple[bool, int]:
    """(reflect, rotation) for pass m of the last row."""
    if recipe.layout == LAYOUT_LITERAL:
        if recipe.case == CASE_GCD3:
            return False, m
        return m % 2 == 1, 0

    start = m * recipe.pass_length
    c = sum(int(row[start]) for row in middle)
    if recipe.case == CASE_GCD3:
        return False, c
    if recipe.spec.orders[0] == 2 * recipe.v[-1]:
        return c % 2 == 1, 0
    return False, c


def fill_last_row(recipe: ConstructionRecipe) -> np.ndarray:
    """
    Row k as passes of s_k blocks of v_k equal entries.

    Raises:
        InvariantViolation: If N is not a whole number of passes.
    """
    s = recipe.spec.orders[-1]
    v = recipe.v[-1]
    P = recipe.pass_length
    if recipe.N % P:
        raise InvariantViolation(f"N={recipe.N} is not a multiple of the pass length {P}")
    middle = [fill_middle_row(recipe, j) for j in range(2, recipe.spec.k)]
    blocks = np.arange(s)
    passes = []
    for m in range(recipe.N // P):
        reflect, shift = _pass_shift(recipe, middle, m)
        order = blocks[::-1] if reflect else (blocks - shift) % s
        passes.append(np.repeat(order, v))
    return np.concatenate(passes)


def construct(
    spec: FactorSpec,
    layout: str = LAYOUT_BALANCED,
    first_ordering: Optional[str] = None,
    capacity_limit: int = DEFAULT_CAPACITY_LIMIT,
) -> OrthogonalArray:
    """
    Build the proper-fraction array for spec.

    The result carries its groups, so verify_conjugacy(array, array.groups)
    works directly.

    Raises:
        UnsupportedCaseError: From select_recipe.
        CapacityError: If N exceeds capacity_limit.
    """
    recipe = select_recipe(spec, layout=layout, first_ordering=first_ordering)
    return construct_from_recipe(recipe, capacity_limit=capacity_limit)


def construct_from_recipe(
    recipe: ConstructionRecipe,
    capacity_limit: int = DEFAULT_CAPACITY_LIMIT,
) -> OrthogonalArray:
    spec = recipe.spec
    if recipe.N > capacity_limit:
        raise CapacityError(f"construction {spec.label}", recipe.N, capacity_limit)
    log = _get_log()
    if not recipe.in_catalog:
        log.warning("Shape outside the published catalog", event="construct.unverified",
                    spec=spec.label, case=recipe.case)
    with log_timing(log, "construct", spec=spec.label, case=recipe.case, layout=recipe.layout) as timer:
        rows = [fill_row1(recipe)]
        rows.extend(fill_middle_row(recipe, j) for j in range(2, spec.k))
        timer.mark("leading_rows")
        rows.append(fill_last_row(recipe))
        timer.mark("last_row")
        for i, row in enumerate(rows, start=1):
            if row.shape != (recipe.N,):
                raise InvariantViolation(f"row {i} has {row.shape[0]} entries, expected {recipe.N}")
        return OrthogonalArray(spec, np.stack(rows), groups=recipe.groups)


# =============================================================================
# Catalog
# =============================================================================

@dataclass
class CatalogEntry:
    """One catalog row with its array and the checks run on it."""
    row: CatalogRow
    recipe: ConstructionRecipe
    array: OrthogonalArray
    fraction: Fraction
    strength: StrengthReport
    max_strength: int
    conjugacy: ConjugacyReport
    proper: bool
    repeats: bool
    mismatches: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _check_entry(row: CatalogRow, layout: str, capacity_limit: int) -> CatalogEntry:
    spec = FactorSpec(row.orders)
    recipe = select_recipe(spec, layout=layout)
    array = construct_from_recipe(recipe, capacity_limit=capacity_limit)
    k = spec.k
    strength = verify_strength(array, k - 1)
    top = max_strength(array)
    conjugacy = verify_conjugacy(array, recipe.groups)
    fraction = array.fraction()

    mismatches = []
    if spec.complete_size != row.complete_size:
        mismatches.append(f"complete size {spec.complete_size:,} != {row.complete_size:,}")
    if array.N != row.array_size:
        mismatches.append(f"array size {array.N:,} != {row.array_size:,}")
    if fraction != Fraction(row.fraction):
        mismatches.append(f"fraction {fraction} != {row.fraction}")
    if not strength.holds:
        mismatches.append(f"strength {k - 1} fails")
    elif top != k - 1:
        mismatches.append(f"max strength {top} != {k - 1}")
    if not conjugacy.holds:
        mismatches.append("conjugacy condition fails")
    if array.N % compute_L(spec, k - 1):
        mismatches.append(f"N={array.N} not a multiple of L_{k - 1}")

    return CatalogEntry(
        row=row,
        recipe=recipe,
        array=array,
        fraction=fraction,
        strength=strength,
        max_strength=top,
        conjugacy=conjugacy,
        proper=is_proper_fraction(array),
        repeats=has_repeats(array),
        mismatches=mismatches,
    )


def build_catalog(
    layout: str = LAYOUT_BALANCED,
    workers: int = 1,
    strict: bool = True,
    capacity_limit: int = DEFAULT_CAPACITY_LIMIT,
    rows: Sequence[CatalogRow] = CATALOG_ROWS,
) -> List[CatalogEntry]:
    """
    Construct and check every published catalog row.

    Rows may be built on a thread pool; the result is always in catalog order.

    Args:
        layout: Last-row layout for every row.
        workers: Thread count; 1 builds sequentially.
        strict: Raise on the first mismatching row instead of returning it.

    Raises:
        CatalogMismatchError: In strict mode, naming the first bad row.
    """
    log = _get_log()
    if workers < 1:
        raise UsageError(f"workers must be at least 1, got {workers}")

    def check(row: CatalogRow) -> CatalogEntry:
        return _check_entry(row, layout, capacity_limit)

    with log_timing(log, "catalog_build", rows=len(rows), workers=workers):
        if workers == 1:
            entries = [check(row) for row in rows]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                entries = list(pool.map(check, rows))

    for entry in entries:
        if entry.ok:
            log.info("Catalog row checked", event="catalog.row", spec=entry.row.label,
                     N=entry.array.N, fraction=str(entry.fraction))
            continue
        log.error("Catalog row mismatch", event="catalog.mismatch", spec=entry.row.label,
                  detail="; ".join(entry.mismatches))
        if strict:
            raise CatalogMismatchError(entry.row.label, "; ".join(entry.mismatches))

    log.info("Catalog finished", event="catalog.done", rows=len(entries),
             failures=sum(1 for e in entries if not e.ok))
    return entries


def catalog_row_for(spec: FactorSpec) -> Optional[CatalogRow]:
    for row in CATALOG_ROWS:
        if row.orders == spec.orders:
            return row
    return None


def leading_block_is_class_union(recipe: ConstructionRecipe) -> bool:
    """
    Whether the first v_k elements of G_1 form a union of conjugacy classes.

    The last-row blocks pair these elements with one symbol of Z_{s_k}.
    """
    g1 = recipe.groups[0]
    leading = set(range(min(recipe.v[-1], g1.order)))
    return all(
        set(members) <= leading or not (set(members) & leading)
        for members in g1.classes().classes
    )

