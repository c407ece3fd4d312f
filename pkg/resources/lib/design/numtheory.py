#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
#  Copyright (C) 2024-2026 Rouzax
#
#  SPDX-License-Identifier: GPL-3.0-or-later
#  See LICENSE.txt for more information.
#

"""
Size bounds for mixed-level arrays.

Any array of strength t on factors of orders s_1..s_k has a size N that is
a multiple of

    L_t = lcm{ prod(s_i for i in I) : |I| = t }

and the sequence L_1 | L_2 | ... | L_k strictly increases up to the threshold

    d = max{ |I| : gcd(s_i for i in I) > 1 }

after which it is constant. All arithmetic is on Python ints, so there is
no overflow to guard against.

Logging:
    Module: numtheory
    Events:
        - numtheory.chain_broken (ERROR): A computed profile violated the
          increasing-then-constant shape (never expected)
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import factorint, isprime

from resources.lib.constants import MAX_FACTORS
from resources.lib.errors import InvariantViolation, UsageError
from resources.lib.utils import StructuredLogger, format_orders, get_logger

# Module-level logger (initialized lazily)
_log: Optional[StructuredLogger] = None


def _get_log() -> StructuredLogger:
    """Get or create the module logger."""
    global _log
    if _log is None:
        _log = get_logger('numtheory')
    return _log


# =============================================================================
# Domain types
# =============================================================================

@dataclass(frozen=True)
class FactorSpec:
    """
    Ordered factor orders s_1..s_k.

    Position is identity: [6, 2, 2] and [2, 6, 2] are different specs even
    though they hold the same multiset of orders.
    """
    orders: Tuple[int, ...]

    def __post_init__(self) -> None:
        orders = tuple(self.orders)
        for position, s in enumerate(orders, start=1):
            if isinstance(s, bool) or not isinstance(s, numbers.Integral):
                raise UsageError(f"factor {position}: order must be an integer, got {s!r}")
            if s < 2:
                raise UsageError(f"factor {position}: order must be at least 2, got {s}")
        if not orders:
            raise UsageError("a factor spec needs at least one factor")
        object.__setattr__(self, 'orders', tuple(int(s) for s in orders))

    @classmethod
    def of(cls, *orders: int) -> "FactorSpec":
        """Shorthand: FactorSpec.of(6, 2, 2)."""
        return cls(tuple(orders))

    @property
    def k(self) -> int:
        return len(self.orders)

    @property
    def complete_size(self) -> int:
        """Size of the complete factorial, s_1 * ... * s_k."""
        return math.prod(self.orders)

    @property
    def label(self) -> str:
        return format_orders(self.orders)

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class BoundProfile:
    """L_1..L_k for a spec, plus the threshold d."""
    spec: FactorSpec
    levels: Tuple[int, ...]
    d: int

    def level(self, t: int) -> int:
        """L_t, 1-based."""
        return self.levels[t - 1]

    def feasible(self, t: int) -> bool:
        """True when a strength-t array can be smaller than the complete design."""
        return self.levels[t - 1] < self.levels[-1]


@dataclass(frozen=True)
class PrimeOrder:
    """p**exponent exactly divides the integer it was computed for."""
    prime: int
    exponent: int


# =============================================================================
# lcm / gcd primitives
# =============================================================================

def _require_values(values: Sequence[int], minimum: int, what: str) -> Tuple[int, ...]:
    values = tuple(values)
    if len(values) < minimum:
        raise UsageError(f"{what} needs at least {minimum} value(s), got {len(values)}")
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise UsageError(f"{what} takes positive integers, got {v!r}")
    return values


def lcm_set(values: Iterable[int]) -> int:
    """Least common multiple of a nonempty collection of positive integers."""
    checked = _require_values(list(values), 1, "lcm_set")
    return reduce(math.lcm, checked, 1)


def gcd_set(values: Iterable[int]) -> int:
    """Greatest common divisor of a nonempty collection of positive integers."""
    checked = _require_values(list(values), 1, "gcd_set")
    return reduce(math.gcd, checked, 0)


def ord_p(p: int, b: int) -> int:
    """
    Exponent of the prime p in b: the f with p**f | b and p**(f+1) not dividing b.

    Raises:
        UsageError: If p is not a prime or b < 1.
    """
    if isinstance(p, bool) or not isinstance(p, int) or p < 2 or not isprime(p):
        raise UsageError(f"ord_p needs a prime, got {p!r}")
    if isinstance(b, bool) or not isinstance(b, int) or b < 1:
        raise UsageError(f"ord_p needs a positive integer, got {b!r}")
    f = 0
    while b % p == 0:
        b //= p
        f += 1
    return f


def prime_orders(b: int) -> List[PrimeOrder]:
    """Factorization of b as PrimeOrder records, smallest prime first."""
    if isinstance(b, bool) or not isinstance(b, int) or b < 1:
        raise UsageError(f"prime_orders needs a positive integer, got {b!r}")
    return [PrimeOrder(int(p), int(f)) for p, f in sorted(factorint(b).items())]


def lcm_prime_by_prime(values: Iterable[int]) -> int:
    """
    lcm computed from factorizations: every prime raised to its largest order.

    Independent of lcm_set; the two are compared in tests.
    """
    checked = _require_values(list(values), 1, "lcm_prime_by_prime")
    exponents: Dict[int, int] = {}
    for v in checked:
        for entry in prime_orders(v):
            exponents[entry.prime] = max(exponents.get(entry.prime, 0), entry.exponent)
    result = 1
    for p, f in exponents.items():
        result *= p ** f
    return result


def _leave_one_out_direct(values: Tuple[int, ...]) -> int:
    products = [math.prod(values[:i] + values[i + 1:]) for i in range(len(values))]
    return lcm_set(products)


def _leave_one_out_quotient(values: Tuple[int, ...]) -> int:
    return math.prod(values) // gcd_set(values)


def lcm_of_leave_one_out_products(values: Sequence[int]) -> int:
    """
    lcm of the n products that each omit one of a_1..a_n.

    Equals (a_1 * ... * a_n) / gcd(a_1..a_n). Both routes are evaluated and
    must agree.

    Raises:
        UsageError: With fewer than two values.
        InvariantViolation: If the two routes disagree.
    """
    checked = _require_values(values, 2, "lcm_of_leave_one_out_products")
    direct = _leave_one_out_direct(checked)
    quotient = _leave_one_out_quotient(checked)
    if direct != quotient:
        raise InvariantViolation(
            f"leave-one-out lcm {direct} != product/gcd {quotient} for {list(checked)}"
        )
    return direct


# =============================================================================
# Bounds
# =============================================================================

def _check_t(spec: FactorSpec, t: int) -> None:
    if isinstance(t, bool) or not isinstance(t, int) or not 1 <= t <= spec.k:
        raise UsageError(f"strength t must be in 1..{spec.k}, got {t!r}")


def _check_k(spec: FactorSpec) -> None:
    if spec.k > MAX_FACTORS:
        raise UsageError(
            f"subset enumeration supports at most {MAX_FACTORS} factors, got {spec.k}"
        )


def compute_L(spec: FactorSpec, t: int) -> int:
    """
    L_t: lcm over all size-t subsets of the product of their orders.

    compute_L(spec, spec.k) is the complete size and compute_L(spec, 1) is
    lcm(s_1..s_k).
    """
    _check_t(spec, t)
    _check_k(spec)
    return reduce(
        math.lcm,
        (math.prod(subset) for subset in combinations(spec.orders, t)),
        1,
    )


def gcd_of_subset(spec: FactorSpec, subset: Iterable[int]) -> int:
    """
    gcd of the orders at the given 0-based factor positions.

    Raises:
        UsageError: For an empty subset or out-of-range positions.
    """
    positions = tuple(subset)
    if not positions:
        raise UsageError("gcd_of_subset needs a nonempty subset")
    for i in positions:
        if not 0 <= i < spec.k:
            raise UsageError(f"factor position {i} out of range 0..{spec.k - 1}")
    return gcd_set(spec.orders[i] for i in positions)


def compute_d(spec: FactorSpec) -> int:
    """
    Largest subset size whose orders share a factor > 1.

    Scans sizes from k downward. Returns 1 iff the orders are pairwise
    coprime and k iff they all share a factor.
    """
    _check_k(spec)
    for size in range(spec.k, 1, -1):
        for subset in combinations(spec.orders, size):
            if gcd_set(subset) > 1:
                return size
    return 1


def witness_subsets_for_d(spec: FactorSpec) -> List[Tuple[int, ...]]:
    """0-based position tuples of size d whose orders share a factor > 1, lexicographic."""
    d = compute_d(spec)
    if d == 1:
        return [(i,) for i in range(spec.k)]
    return [
        subset for subset in combinations(range(spec.k), d)
        if gcd_of_subset(spec, subset) > 1
    ]


def bound_profile(spec: FactorSpec) -> BoundProfile:
    """
    All L_t together with d.

    Raises:
        InvariantViolation: If the levels fail to divide each other or are
            not strictly increasing below d and constant from d on.
    """
    levels = tuple(compute_L(spec, t) for t in range(1, spec.k + 1))
    d = compute_d(spec)
    problems = []
    for t in range(1, spec.k):
        lower, upper = levels[t - 1], levels[t]
        if upper % lower:
            problems.append(f"L_{t}={lower} does not divide L_{t + 1}={upper}")
        if t < d and not lower < upper:
            problems.append(f"L_{t}={lower} not below L_{t + 1}={upper} with d={d}")
        if t >= d and lower != upper:
            problems.append(f"L_{t}={lower} differs from L_{t + 1}={upper} with d={d}")
    if problems:
        _get_log().error(
            "Bound chain broken",
            event="numtheory.chain_broken",
            spec=spec.label,
            problems="; ".join(problems),
        )
        raise InvariantViolation(f"{spec.label}: {problems[0]}")
    return BoundProfile(spec=spec, levels=levels, d=d)


def proper_fraction_feasible(spec: FactorSpec, t: int) -> bool:
    """
    True iff L_t < L_k, equivalently t < d.

    When false, every array of strength t has at least as many runs as the
    complete factorial.
    """
    _check_t(spec, t)
    return compute_L(spec, t) < spec.complete_size
