#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
#  Copyright (C) 2024-2026 Rouzax
#
#  SPDX-License-Identifier: GPL-3.0-or-later
#  See LICENSE.txt for more information.
#

"""
Exhaustive search for small arrays of a given size and strength.

Arrays are enumerated as multisets: the N columns, written as indices into
the complete factorial (lexicographic order), are chosen nondecreasing, so
each multiset is visited once. Every size-t projection keeps a counter per
cell, capped at lambda_I = N / prod(s_i, i in I); a branch dies as soon as
a cell goes over its cap.

A second cut uses the sort order: once the search moves past column x, no
later column can be x, so every cell whose largest contributing column is x
must already be full.

The traversal order is fixed, so results and node counts are reproducible.

Logging:
    Module: search
    Events:
        - search.bound (INFO): N is not a multiple of L_t, nothing explored
        - search.budget (WARNING): Node budget exhausted, results are partial
        - search.done (INFO): Search finished
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from resources.lib.constants import (
    DEFAULT_CAPACITY_LIMIT,
    DEFAULT_RESULT_LIMIT,
    DEFAULT_SEARCH_BUDGET,
    SEARCH_STATUS_BOUND,
    SEARCH_STATUS_BUDGET,
    SEARCH_STATUS_EXHAUSTED,
    SEARCH_STATUS_LIMIT,
    UNIQUENESS_INCONCLUSIVE,
    UNIQUENESS_NOT_UNIQUE,
    UNIQUENESS_UNIQUE,
)
from resources.lib.design.numtheory import FactorSpec, compute_L, compute_d
from resources.lib.design.oarray import OrthogonalArray
from resources.lib.errors import CapacityError, UsageError
from resources.lib.utils import StructuredLogger, get_logger, log_timing

# Module-level logger (initialized lazily)
_log: Optional[StructuredLogger] = None


def _get_log() -> StructuredLogger:
    """Get or create the module logger."""
    global _log
    if _log is None:
        _log = get_logger('search')
    return _log


@dataclass
class SearchResult:
    """
    Arrays found plus how the search ended.

    status is one of exhausted, limit-reached, budget-exceeded or
    bound-violation. Only 'exhausted' means the list is complete.
    """
    spec: FactorSpec
    N: int
    t: int
    arrays: List[OrthogonalArray] = field(default_factory=list)
    nodes: int = 0
    status: str = SEARCH_STATUS_EXHAUSTED
    note: str = ""

    @property
    def complete(self) -> bool:
        return self.status == SEARCH_STATUS_EXHAUSTED

    @property
    def inconclusive(self) -> bool:
        return self.status == SEARCH_STATUS_BUDGET

    def summary(self) -> str:
        text = (
            f"{self.spec.label} N={self.N} t={self.t}: {len(self.arrays)} array(s), "
            f"{self.nodes:,} nodes, {self.status}"
        )
        return f"{text} ({self.note})" if self.note else text


@dataclass
class UniquenessReport:
    spec: FactorSpec
    t: int
    verdict: str
    witness: Optional[OrthogonalArray]
    search: SearchResult


class _Budget(Exception):
    pass


class _Limit(Exception):
    pass


class _ProjectionCounters:
    """
    Flat counters for every cell of every size-t projection.

    cell_of[x] lists the counter slot each subset assigns column x;
    closes_at[x] lists the slots whose largest contributing column is x.
    """

    def __init__(self, spec: FactorSpec, N: int, t: int) -> None:
        total = spec.complete_size
        columns = np.indices(spec.orders).reshape(spec.k, -1)
        maxima = np.array(spec.orders) - 1
        slots, caps, last = [], [], []
        offset = 0
        for subset in itertools.combinations(range(spec.k), t):
            shape = tuple(spec.orders[i] for i in subset)
            cells = math.prod(shape)
            slots.append(offset + np.ravel_multi_index(columns[list(subset)], shape))
            caps.append(np.full(cells, N // cells, dtype=np.int64))
            # largest column for each cell: fix the subset, max out the rest
            fixed = np.tile(maxima[:, None], (1, cells))
            fixed[list(subset)] = np.indices(shape).reshape(t, -1)
            last.append(np.ravel_multi_index(fixed, spec.orders))
            offset += cells

        self.cell_of = np.stack(slots, axis=1)  # (total, subsets)
        self.caps = np.concatenate(caps)
        self.counts = np.zeros(offset, dtype=np.int64)
        last_column = np.concatenate(last)
        order = np.argsort(last_column, kind="stable")
        bounds = np.searchsorted(last_column[order], np.arange(total + 1))
        self.closes_at = [order[bounds[x]:bounds[x + 1]] for x in range(total)]

    def add(self, x: int) -> bool:
        """Count column x; False (and undone) if some cell overflows."""
        slots = self.cell_of[x]
        self.counts[slots] += 1
        if (self.counts[slots] > self.caps[slots]).any():
            self.counts[slots] -= 1
            return False
        return True

    def remove(self, x: int) -> None:
        self.counts[self.cell_of[x]] -= 1

    def closed_ok(self, x: int) -> bool:
        """All cells that column x was the last chance for are full."""
        slots = self.closes_at[x]
        return bool((self.counts[slots] == self.caps[slots]).all())


def _check_args(spec: FactorSpec, N: int, t: int, limit: int) -> None:
    if isinstance(t, bool) or not isinstance(t, int) or not 1 <= t <= spec.k:
        raise UsageError(f"strength t must be in 1..{spec.k}, got {t!r}")
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise UsageError(f"size N must be a positive integer, got {N!r}")
    if limit < 1:
        raise UsageError(f"limit must be at least 1, got {limit}")


def search_arrays(
    spec: FactorSpec,
    N: int,
    t: int,
    limit: int = DEFAULT_RESULT_LIMIT,
    exclude_complete: bool = False,
    budget: int = DEFAULT_SEARCH_BUDGET,
    capacity_limit: int = DEFAULT_CAPACITY_LIMIT,
) -> SearchResult:
    """
    Find up to `limit` arrays of size N and strength t, in canonical order.

    Args:
        spec: Factor orders.
        N: Number of runs.
        t: Required strength.
        limit: Stop after this many arrays.
        exclude_complete: Skip arrays made of N/L_k copies of the complete design.
        budget: Maximum number of column placements to try.

    Returns:
        SearchResult; a budget hit is reported in status, not raised.

    Raises:
        UsageError: For out-of-range t, N or limit.
        CapacityError: If the complete factorial is too large to enumerate.
    """
    _check_args(spec, N, t, limit)
    log = _get_log()
    result = SearchResult(spec=spec, N=N, t=t)

    bound = compute_L(spec, t)
    if N % bound:
        result.status = SEARCH_STATUS_BOUND
        result.note = f"N={N} is not a multiple of L_{t}={bound}"
        log.info("Size fails the divisibility bound", event="search.bound",
                 spec=spec.label, N=N, t=t, L=bound)
        return result

    total = spec.complete_size
    if total > capacity_limit:
        raise CapacityError(f"search space {spec.label}", total, capacity_limit)

    counters = _ProjectionCounters(spec, N, t)
    columns = np.indices(spec.orders).reshape(spec.k, -1)
    copies = N // total if N % total == 0 else 0
    chosen: List[int] = []

    def record() -> None:
        if exclude_complete and copies and all(
            chosen[i] == i // copies for i in range(N)
        ):
            return
        result.arrays.append(OrthogonalArray(spec, columns[:, chosen]))
        if len(result.arrays) >= limit:
            raise _Limit

    def explore() -> None:
        # one [start, next candidate] frame per chosen column, plus the root
        frames = [[0, 0]]
        while frames:
            frame = frames[-1]
            start, x = frame
            if x >= total or (x > start and not counters.closed_ok(x - 1)):
                frames.pop()
                if frames:
                    counters.remove(chosen.pop())
                continue
            frame[1] = x + 1
            result.nodes += 1
            if result.nodes > budget:
                raise _Budget
            if not counters.add(x):
                continue
            chosen.append(x)
            if len(chosen) == N:
                record()
                counters.remove(chosen.pop())
                continue
            frames.append([x, x])

    with log_timing(log, "search", spec=spec.label, N=N, t=t):
        try:
            explore()
        except _Limit:
            result.status = SEARCH_STATUS_LIMIT
        except _Budget:
            result.nodes = budget
            result.status = SEARCH_STATUS_BUDGET
            result.note = f"node budget {budget:,} exhausted"
            log.warning("Search budget exhausted", event="search.budget",
                        spec=spec.label, N=N, t=t, found=len(result.arrays), nodes=budget)

    log.info("Search finished", event="search.done", spec=spec.label, N=N, t=t,
             found=len(result.arrays), nodes=result.nodes, status=result.status)
    return result


def uniqueness_probe(
    spec: FactorSpec,
    t: int,
    budget: int = DEFAULT_SEARCH_BUDGET,
    capacity_limit: int = DEFAULT_CAPACITY_LIMIT,
) -> UniquenessReport:
    """
    Is the complete factorial the only strength-t array of its size?

    Only meaningful when L_t = L_k (t >= d); otherwise smaller arrays exist
    in principle and the question is a different one.

    Raises:
        UsageError: If t < d.
    """
    d = compute_d(spec)
    if isinstance(t, int) and not isinstance(t, bool) and 1 <= t < d:
        raise UsageError(
            f"t={t} is below d={d}, so L_{t} < L_{spec.k} and smaller strength-{t} "
            "arrays are not ruled out; uniqueness at size L_k needs t >= d"
        )
    found = search_arrays(
        spec, spec.complete_size, t, limit=1, exclude_complete=True,
        budget=budget, capacity_limit=capacity_limit,
    )
    if found.arrays:
        verdict = UNIQUENESS_NOT_UNIQUE
    elif found.status == SEARCH_STATUS_EXHAUSTED:
        verdict = UNIQUENESS_UNIQUE
    else:
        verdict = UNIQUENESS_INCONCLUSIVE
    return UniquenessReport(
        spec=spec,
        t=t,
        verdict=verdict,
        witness=found.arrays[0] if found.arrays else None,
        search=found,
    )


def canonical_columns(array: OrthogonalArray) -> Tuple[int, ...]:
    """The array's runs as sorted complete-factorial indices (its search identity)."""
    flat = np.ravel_multi_index(array.matrix, array.spec.orders)
    return tuple(int(x) for x in np.sort(flat))
