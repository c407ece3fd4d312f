#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
#  Copyright (C) 2024-2026 Rouzax
#
#  SPDX-License-Identifier: GPL-3.0-or-later
#  See LICENSE.txt for more information.
#

"""
The array model and its two verifiers.

An array is a k x N matrix of symbol indices: row i holds factor i, each
column is one run. Labels are only used at I/O boundaries.

verify_strength checks every size-t projection with a dense counter (numpy
bincount over ravelled cell indices), subsets in lexicographic order, so
the witness of a failure is always the same one. verify_conjugacy checks
that the multiplicity of runs is constant on each conjugacy class of the
product group; for a design without repeats that is the same as the design
being a union of classes.

Logging:
    Module: oarray
    Events:
        - oarray.reshuffle (DEBUG): strength1_noncomplete drew a complete fill
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from resources.lib.constants import (
    DEFAULT_CAPACITY_LIMIT,
    MAX_PROJECTION_CELLS,
    MAX_RESHUFFLE_ATTEMPTS,
)
from resources.lib.design.groups import FiniteGroup, make_cyclic, product_class_ids, tag_for
from resources.lib.design.numtheory import FactorSpec, compute_L
from resources.lib.errors import CapacityError, InvariantViolation, UsageError
from resources.lib.utils import StructuredLogger, get_logger

# Module-level logger (initialized lazily)
_log: Optional[StructuredLogger] = None


def _get_log() -> StructuredLogger:
    """Get or create the module logger."""
    global _log
    if _log is None:
        _log = get_logger('oarray')
    return _log


Run = Tuple[int, ...]


def default_symbols(s: int) -> Tuple[str, ...]:
    """Decimal labels '0'..'s-1'."""
    return tuple(str(i) for i in range(s))


class OrthogonalArray:
    """
    A multiset of N runs over k factors.

    Attributes:
        spec: The factor orders.
        symbol_sets: Ordered labels per factor; row i holds indices into
            symbol_sets[i].
        matrix: Read-only int array of shape (k, N).
        groups: Optional per-factor groups whose element order matches
            symbol_sets (set by the constructions and the file parser).
    """

    def __init__(
        self,
        spec: FactorSpec,
        matrix: np.ndarray,
        symbol_sets: Optional[Sequence[Sequence[str]]] = None,
        groups: Optional[Sequence[FiniteGroup]] = None,
    ) -> None:
        grid = np.array(matrix, dtype=np.int64, copy=True)
        if grid.ndim != 2 or grid.shape[0] != spec.k:
            raise UsageError(f"matrix must have {spec.k} rows, got shape {grid.shape}")
        if grid.shape[1] < 1:
            raise UsageError("an array needs at least one run")

        if groups is not None:
            groups = tuple(groups)
            if len(groups) != spec.k:
                raise UsageError(f"expected {spec.k} groups, got {len(groups)}")
            if symbol_sets is None:
                symbol_sets = [g.elements for g in groups]
        if symbol_sets is None:
            symbol_sets = [default_symbols(s) for s in spec.orders]
        symbols = tuple(tuple(str(x) for x in labels) for labels in symbol_sets)
        if len(symbols) != spec.k:
            raise UsageError(f"expected {spec.k} symbol sets, got {len(symbols)}")

        for i, (s, labels) in enumerate(zip(spec.orders, symbols)):
            if len(labels) != s:
                raise UsageError(f"factor {i + 1}: {len(labels)} symbols for order {s}")
            if groups is not None and groups[i].elements != labels:
                raise UsageError(f"factor {i + 1}: symbols do not match group {groups[i].name}")
            row = grid[i]
            if row.min() < 0 or row.max() >= s:
                raise UsageError(f"factor {i + 1}: entries must lie in 0..{s - 1}")

        grid.setflags(write=False)
        self.spec = spec
        self.matrix: np.ndarray = grid
        self.symbol_sets: Tuple[Tuple[str, ...], ...] = symbols
        self.groups: Optional[Tuple[FiniteGroup, ...]] = groups

    # -------------------------------------------------------------------------

    @classmethod
    def from_labels(
        cls,
        rows: Sequence[Sequence[str]],
        symbol_sets: Sequence[Sequence[str]],
        groups: Optional[Sequence[FiniteGroup]] = None,
    ) -> "OrthogonalArray":
        """
        Build from label rows, one row per factor.

        Raises:
            UsageError: For unknown labels or ragged rows.
        """
        spec = FactorSpec(tuple(len(labels) for labels in symbol_sets))
        widths = {len(row) for row in rows}
        if len(widths) != 1:
            raise UsageError(f"rows have different lengths: {sorted(widths)}")
        matrix = []
        for i, (row, labels) in enumerate(zip(rows, symbol_sets)):
            index = {label: j for j, label in enumerate(labels)}
            try:
                matrix.append([index[label] for label in row])
            except KeyError as e:
                raise UsageError(f"factor {i + 1}: unknown symbol {e.args[0]!r}") from None
        return cls(spec, np.array(matrix), symbol_sets=symbol_sets, groups=groups)

    @property
    def k(self) -> int:
        return self.spec.k

    @property
    def N(self) -> int:
        return int(self.matrix.shape[1])

    @property
    def tags(self) -> Tuple[str, ...]:
        """File tags per factor (group tags, or Z<s> for plain symbol sets)."""
        groups = self.groups if self.groups is not None else cyclic_groups(self.spec)
        return tuple(tag_for(g) for g in groups)

    def column(self, j: int) -> Run:
        return tuple(int(x) for x in self.matrix[:, j])

    def columns(self) -> List[Run]:
        return [tuple(int(x) for x in col) for col in self.matrix.T]

    def multiplicities(self) -> Dict[Run, int]:
        """Run -> number of occurrences, for runs that occur."""
        return dict(Counter(self.columns()))

    def with_columns_permuted(self, order: Sequence[int]) -> "OrthogonalArray":
        """Same multiset of runs, columns listed in the given order."""
        perm = np.asarray(order, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.N)):
            raise UsageError("column order must be a permutation of 0..N-1")
        return OrthogonalArray(self.spec, self.matrix[:, perm], self.symbol_sets, self.groups)

    def label_rows(self) -> List[List[str]]:
        return [
            [labels[x] for x in row.tolist()]
            for labels, row in zip(self.symbol_sets, self.matrix)
        ]

    def fraction(self) -> Fraction:
        """N / L_k."""
        return Fraction(self.N, self.spec.complete_size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrthogonalArray):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.symbol_sets == other.symbol_sets
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.spec, self.symbol_sets, self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"OrthogonalArray({self.spec.label}, N={self.N})"


# =============================================================================
# Reports
# =============================================================================

@dataclass(frozen=True)
class StrengthWitness:
    """Two cells of one projection with different counts. Positions are 0-based."""
    subset: Tuple[int, ...]
    cell_a: Run
    count_a: int
    cell_b: Run
    count_b: int

    def describe(self, array: OrthogonalArray) -> str:
        factors = ",".join(str(i + 1) for i in self.subset)

        def name(cell: Run) -> str:
            return "(" + ",".join(array.symbol_sets[i][x] for i, x in zip(self.subset, cell)) + ")"

        return (
            f"factors {{{factors}}}: {name(self.cell_a)} occurs {self.count_a}x, "
            f"{name(self.cell_b)} occurs {self.count_b}x"
        )


@dataclass(frozen=True)
class StrengthReport:
    """
    Outcome of verify_strength.

    lambdas maps each checked subset (0-based positions) to its common count;
    on failure it holds the subsets that passed before the witness.
    """
    claimed_t: int
    holds: bool
    lambdas: Dict[Tuple[int, ...], int] = field(default_factory=dict)
    witness: Optional[StrengthWitness] = None


@dataclass(frozen=True)
class ConjugacyWitness:
    """Two conjugate runs that occur a different number of times."""
    run_a: Run
    count_a: int
    run_b: Run
    count_b: int

    def describe(self, groups: Sequence[FiniteGroup]) -> str:
        def name(run: Run) -> str:
            return "(" + ",".join(g.elements[x] for g, x in zip(groups, run)) + ")"

        return (
            f"{name(self.run_a)} occurs {self.count_a}x but conjugate "
            f"{name(self.run_b)} occurs {self.count_b}x"
        )


@dataclass(frozen=True)
class ConjugacyReport:
    holds: bool
    witness: Optional[ConjugacyWitness] = None
    classes_checked: int = 0


# =============================================================================
# Operations
# =============================================================================

def complete_factorial(
    spec: FactorSpec,
    capacity_limit: int = DEFAULT_CAPACITY_LIMIT,
    groups: Optional[Sequence[FiniteGroup]] = None,
) -> OrthogonalArray:
    """
    Every run exactly once, columns in lexicographic order.

    Raises:
        CapacityError: If s_1 * ... * s_k exceeds capacity_limit.
    """
    size = spec.complete_size
    if size > capacity_limit:
        raise CapacityError(f"complete factorial {spec.label}", size, capacity_limit)
    matrix = np.indices(spec.orders).reshape(spec.k, -1)
    return OrthogonalArray(spec, matrix, groups=groups)


def _check_strength_arg(array: OrthogonalArray, t: int) -> None:
    if isinstance(t, bool) or not isinstance(t, int) or not 1 <= t <= array.k:
        raise UsageError(f"strength t must be in 1..{array.k}, got {t!r}")


def _projection_counts(array: OrthogonalArray, subset: Tuple[int, ...]) -> np.ndarray:
    shape = tuple(array.spec.orders[i] for i in subset)
    cells = math.prod(shape)
    if cells > MAX_PROJECTION_CELLS:
        raise CapacityError(f"projection onto factors {subset}", cells, MAX_PROJECTION_CELLS)
    flat = np.ravel_multi_index(array.matrix[list(subset)], shape)
    return np.bincount(flat, minlength=cells)


def verify_strength(array: OrthogonalArray, t: int) -> StrengthReport:
    """
    Check that every projection onto t factors is a constant multiple of
    the complete factorial on those factors.

    Subsets are visited in lexicographic order and checking stops at the
    first failure. The witness pairs the first cell of that projection with
    the first cell whose count differs from it.
    """
    _check_strength_arg(array, t)
    lambdas: Dict[Tuple[int, ...], int] = {}
    for subset in itertools.combinations(range(array.k), t):
        counts = _projection_counts(array, subset)
        first = int(counts[0])
        differing = np.flatnonzero(counts != first)
        if differing.size:
            shape = tuple(array.spec.orders[i] for i in subset)
            other = int(differing[0])
            witness = StrengthWitness(
                subset=subset,
                cell_a=tuple(0 for _ in subset),
                count_a=first,
                cell_b=tuple(int(x) for x in np.unravel_index(other, shape)),
                count_b=int(counts[other]),
            )
            return StrengthReport(claimed_t=t, holds=False, lambdas=lambdas, witness=witness)
        lambdas[subset] = first
    return StrengthReport(claimed_t=t, holds=True, lambdas=lambdas)


def max_strength(array: OrthogonalArray) -> int:
    """Largest t for which verify_strength holds; 0 if t = 1 already fails."""
    strength = 0
    for t in range(1, array.k + 1):
        if not verify_strength(array, t).holds:
            break
        strength = t
    return strength


def count_projection_naive(array: OrthogonalArray, subset: Sequence[int]) -> Dict[Run, int]:
    """
    Count every cell of a projection by walking the runs one at a time.

    Deliberately independent of the numpy path; used to cross-check it.
    """
    positions = tuple(subset)
    counts: Dict[Run, int] = {
        cell: 0
        for cell in itertools.product(*(range(array.spec.orders[i]) for i in positions))
    }
    for run in array.columns():
        counts[tuple(run[i] for i in positions)] += 1
    return counts


def _check_groups(array: OrthogonalArray, groups: Sequence[FiniteGroup]) -> Tuple[FiniteGroup, ...]:
    checked = tuple(groups)
    if len(checked) != array.k:
        raise UsageError(f"expected {array.k} groups, got {len(checked)}")
    for i, (g, labels) in enumerate(zip(checked, array.symbol_sets)):
        if g.elements != labels:
            raise UsageError(
                f"factor {i + 1}: symbols {' '.join(labels)} do not match "
                f"group {g.name} ({' '.join(g.elements)})"
            )
    return checked


def verify_conjugacy(array: OrthogonalArray, groups: Sequence[FiniteGroup]) -> ConjugacyReport:
    """
    Check that the multiplicity of runs is constant on every conjugacy class
    of G_1 x ... x G_k.

    Only classes that contain at least one run need checking; they are
    visited in the product group's class order. A class with some members
    missing fails with the first present and the first absent member.

    Raises:
        UsageError: If a group's elements do not match the factor's symbols.
    """
    checked = _check_groups(array, groups)
    class_ids = product_class_ids(checked)
    partitions = [g.classes() for g in checked]

    present, counts = np.unique(array.matrix.T, axis=0, return_counts=True)
    multiplicity: Dict[Run, int] = {
        tuple(int(x) for x in run): int(c) for run, c in zip(present, counts)
    }
    by_class: Dict[Tuple[int, ...], List[Run]] = {}
    for run in multiplicity:
        key = tuple(int(ids[x]) for ids, x in zip(class_ids, run))
        by_class.setdefault(key, []).append(run)

    for number, key in enumerate(sorted(by_class), start=1):
        members = by_class[key]
        first = members[0]
        expected = math.prod(len(p.classes[c]) for p, c in zip(partitions, key))
        if len(members) < expected:
            for candidate in itertools.product(*(p.classes[c] for p, c in zip(partitions, key))):
                if candidate not in multiplicity:
                    witness = ConjugacyWitness(first, multiplicity[first], tuple(candidate), 0)
                    return ConjugacyReport(holds=False, witness=witness, classes_checked=number)
        for run in members[1:]:
            if multiplicity[run] != multiplicity[first]:
                witness = ConjugacyWitness(first, multiplicity[first], run, multiplicity[run])
                return ConjugacyReport(holds=False, witness=witness, classes_checked=number)
    return ConjugacyReport(holds=True, classes_checked=len(by_class))


def has_repeats(array: OrthogonalArray) -> bool:
    distinct = np.unique(array.matrix.T, axis=0).shape[0]
    return distinct < array.N


def is_proper_fraction(array: OrthogonalArray) -> bool:
    """True iff no run repeats and N < L_k."""
    return array.N < array.spec.complete_size and not has_repeats(array)


def divisibility_check(
    array: OrthogonalArray,
    t: int,
    report: Optional[StrengthReport] = None,
) -> bool:
    """
    Assert that an array of strength t has N divisible by L_t.

    Raises:
        UsageError: If the array does not have strength t.
        InvariantViolation: If N is not a multiple of L_t.
    """
    if report is None or report.claimed_t != t:
        report = verify_strength(array, t)
    if not report.holds:
        raise UsageError(f"array {array.spec.label} (N={array.N}) does not have strength {t}")
    bound = compute_L(array.spec, t)
    if array.N % bound:
        raise InvariantViolation(
            f"strength-{t} array {array.spec.label} has N={array.N}, not a multiple of L_{t}={bound}"
        )
    return True


def strength1_noncomplete(
    spec: FactorSpec,
    seed: int,
    capacity_limit: int = DEFAULT_CAPACITY_LIMIT,
) -> OrthogonalArray:
    """
    A size-L_k array of strength at least 1 that is not the complete design.

    Row i gets L_k / s_i copies of each symbol in a seed-determined order;
    fills that happen to be complete are reshuffled.

    Raises:
        UsageError: For a single factor, where every fill is complete.
        CapacityError: If L_k exceeds capacity_limit.
    """
    if spec.k < 2:
        raise UsageError("a single factor admits only the complete design")
    size = spec.complete_size
    if size > capacity_limit:
        raise CapacityError(f"strength-1 fill {spec.label}", size, capacity_limit)

    rng = np.random.default_rng(seed)
    base = [np.repeat(np.arange(s), size // s) for s in spec.orders]
    for attempt in range(1, MAX_RESHUFFLE_ATTEMPTS + 1):
        matrix = np.stack([rng.permutation(row) for row in base])
        array = OrthogonalArray(spec, matrix)
        if has_repeats(array):
            return array
        _get_log().debug("Complete fill drawn, reshuffling", spec=spec.label, attempt=attempt)
    raise InvariantViolation(
        f"{spec.label}: {MAX_RESHUFFLE_ATTEMPTS} shuffles all produced the complete design"
    )


def cyclic_groups(spec: FactorSpec) -> Tuple[FiniteGroup, ...]:
    """Z_{s_1} x ... x Z_{s_k}, the default groups for plain symbol sets."""
    return tuple(make_cyclic(s) for s in spec.orders)
