#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
#  Copyright (C) 2024-2026 Rouzax
#
#  SPDX-License-Identifier: GPL-3.0-or-later
#  See LICENSE.txt for more information.
#

"""
Finite groups as labelled multiplication tables.

Only what the constructions and the conjugacy verifier need: cyclic groups,
dihedral groups with fixed element names, direct products and conjugacy
classes. Groups are immutable once built; multiplication is a table lookup.

Element orderings matter because they become the row order of every array
file, so the named groups pin both the labels and their order:

    S3  (Dih3): e x y a b c        classes e | x y | a b c
    S3b       : e a b c x y        (same group, second ordering)
    D4  (Dih4): e q r s a b x y    classes e | q | r s | a b | x y
    D5  (Dih5): e a b c d v w x y z classes e | a d | b c | v w x y z

Logging:
    Module: groups
    Events:
        - groups.assoc_skipped (DEBUG): Group too large for the exhaustive
          associativity check
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from resources.lib.constants import (
    ASSOCIATIVITY_CHECK_MAX_ORDER,
    DIH4_ELEMENTS,
    DIH5_ELEMENTS,
    MAX_PROJECTION_CELLS,
    ORDERING_FIRST,
    ORDERING_SECOND,
    S3_ELEMENTS,
    S3_SECOND_ORDER,
    TAG_CYCLIC_PREFIX,
    TAG_DIH4,
    TAG_DIH5,
    TAG_DIHEDRAL_PREFIX,
    TAG_S3,
    TAG_S3_SECOND,
)
from resources.lib.errors import CapacityError, UsageError
from resources.lib.utils import StructuredLogger, get_logger

# Module-level logger (initialized lazily)
_log: Optional[StructuredLogger] = None


def _get_log() -> StructuredLogger:
    """Get or create the module logger."""
    global _log
    if _log is None:
        _log = get_logger('groups')
    return _log


class FiniteGroup:
    """
    A finite group given by ordered element labels and a multiplication table.

    table[i, j] is the index of elements[i] * elements[j].

    Raises (on construction):
        UsageError: If the table is not a Latin square, has no two-sided
            identity, or (for order <= 64) is not associative.
    """

    def __init__(
        self,
        name: str,
        elements: Sequence[str],
        table: np.ndarray,
        tag: Optional[str] = None,
    ) -> None:
        labels = tuple(str(e) for e in elements)
        n = len(labels)
        grid = np.asarray(table, dtype=np.int64)
        if n < 1 or grid.shape != (n, n):
            raise UsageError(f"{name}: table shape {grid.shape} does not match {n} elements")
        if len(set(labels)) != n:
            raise UsageError(f"{name}: element labels are not distinct")

        expected = np.arange(n)
        if not (
            np.array_equal(np.sort(grid, axis=1), np.broadcast_to(expected, (n, n)))
            and np.array_equal(np.sort(grid, axis=0), np.broadcast_to(expected[:, None], (n, n)))
        ):
            raise UsageError(f"{name}: multiplication table is not a Latin square")

        identity_rows = np.flatnonzero((grid == expected).all(axis=1))
        if identity_rows.size != 1 or not np.array_equal(grid[:, identity_rows[0]], expected):
            raise UsageError(f"{name}: no two-sided identity")

        if n <= ASSOCIATIVITY_CHECK_MAX_ORDER:
            left = grid[grid[:, :, None], expected[None, None, :]]
            right = grid[expected[:, None, None], grid[None, :, :]]
            if not np.array_equal(left, right):
                raise UsageError(f"{name}: multiplication is not associative")
        else:
            _get_log().debug("Associativity check skipped", group=name, order=n)

        grid.setflags(write=False)
        self.name = name
        self.tag = tag
        self.elements: Tuple[str, ...] = labels
        self.table: np.ndarray = grid
        self.identity = int(identity_rows[0])
        inverses = np.argmax(grid == self.identity, axis=1)
        inverses.setflags(write=False)
        self.inverses: np.ndarray = inverses
        self._index: Dict[str, int] = {label: i for i, label in enumerate(labels)}
        self._classes: Optional[ConjugacyPartition] = None

    # -------------------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.elements == other.elements and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.elements, self.table.tobytes()))

    def index_of(self, label: str) -> int:
        """Element index for a label. Raises UsageError for unknown labels."""
        try:
            return self._index[label]
        except KeyError:
            raise UsageError(f"{self.name}: unknown element {label!r}") from None

    def has_label(self, label: str) -> bool:
        return label in self._index

    def multiply(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inverses[a])

    def conjugate(self, g: int, h: int) -> int:
        """h g h^-1."""
        return int(self.table[self.table[h, g], self.inverses[h]])

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def classes(self) -> "ConjugacyPartition":
        """Cached conjugacy_classes(self)."""
        if self._classes is None:
            self._classes = conjugacy_classes(self)
        return self._classes

    def relabeled(self, sequence: Sequence[int], labels: Sequence[str],
                  name: str, tag: Optional[str] = None) -> "FiniteGroup":
        """
        Same group with elements listed in a new order under new labels.

        sequence[i] is the old index of the element that becomes index i.
        """
        order = np.asarray(sequence, dtype=np.int64)
        if sorted(order.tolist()) != list(range(self.order)):
            raise UsageError(f"{name}: {list(sequence)} is not a permutation of 0..{self.order - 1}")
        position = np.empty_like(order)
        position[order] = np.arange(self.order)
        new_table = position[self.table[order[:, None], order[None, :]]]
        return FiniteGroup(name, labels, new_table, tag=tag)


@dataclass(frozen=True)
class ConjugacyPartition:
    """
    Conjugacy classes as tuples of element indices.

    Classes are ordered by their smallest element index; members are sorted.
    The identity always forms the first class.
    """
    classes: Tuple[Tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    def class_ids(self, order: int) -> np.ndarray:
        """Array mapping element index -> class position."""
        ids = np.empty(order, dtype=np.int64)
        for position, members in enumerate(self.classes):
            ids[list(members)] = position
        return ids

    def labels(self, group: FiniteGroup) -> List[List[str]]:
        return [[group.elements[i] for i in members] for members in self.classes]

    def render(self, group: FiniteGroup) -> str:
        """Classes as 'e | x y | a b c'."""
        return " | ".join(" ".join(names) for names in self.labels(group))


@dataclass(frozen=True)
class GroupOrdering:
    """A named listing order of a group's elements."""
    group: FiniteGroup
    sequence: Tuple[int, ...]
    label: str

    def apply(self, tag: Optional[str] = None) -> FiniteGroup:
        """The group with its elements listed in this order (labels kept)."""
        labels = [self.group.elements[i] for i in self.sequence]
        return self.group.relabeled(self.sequence, labels, name=f"{self.group.name}-{self.label}",
                                    tag=tag)


# =============================================================================
# Builders
# =============================================================================

def make_cyclic(n: int) -> FiniteGroup:
    """Z_n with elements '0'..'n-1' under addition mod n."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise UsageError(f"cyclic group order must be an integer >= 2, got {n!r}")
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    return FiniteGroup(f"Z{n}", [str(i) for i in range(n)], table, tag=f"{TAG_CYCLIC_PREFIX}{n}")


def _dihedral_table(n: int) -> np.ndarray:
    # index a + n*s stands for r^a f^s; (r^a f^s)(r^b f^t) = r^(a + (-1)^s b) f^(s+t)
    idx = np.arange(2 * n)
    a, s = idx % n, idx // n
    rot = (a[:, None] + np.where(s[:, None] == 1, -1, 1) * a[None, :]) % n
    flip = (s[:, None] + s[None, :]) % 2
    return rot + n * flip


# r^0, r^2, r^1, r^3, f, r^2 f, r f, r^3 f
_DIH4_SEQUENCE = (0, 2, 1, 3, 4, 6, 5, 7)


def make_dihedral(n: int) -> FiniteGroup:
    """
    Dih_n of order 2n from r^n = f^2 = e, f r f = r^-1.

    n = 3, 4, 5 get the named labels (S3, Dih4, Dih5 above). Larger n use
    generic names: 'e', 'r1'..'r{n-1}' for rotations and 'f0'..'f{n-1}' for
    the reflections r^a f.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 3:
        raise UsageError(f"dihedral group needs n >= 3, got {n!r}")
    table = _dihedral_table(n)
    if n == 3:
        return FiniteGroup("S3", S3_ELEMENTS, table, tag=TAG_S3)
    if n == 4:
        natural = FiniteGroup("Dih4-natural", [f"g{i}" for i in range(8)], table)
        return natural.relabeled(_DIH4_SEQUENCE, DIH4_ELEMENTS, name="Dih4", tag=TAG_DIH4)
    if n == 5:
        return FiniteGroup("Dih5", DIH5_ELEMENTS, table, tag=TAG_DIH5)
    labels = ["e"] + [f"r{a}" for a in range(1, n)] + [f"f{a}" for a in range(n)]
    return FiniteGroup(f"Dih{n}", labels, table, tag=f"{TAG_DIHEDRAL_PREFIX}{n}")


def s3_ordering(which: str = ORDERING_FIRST) -> GroupOrdering:
    """S3-first (e x y a b c) or S3-second (e a b c x y)."""
    s3 = make_dihedral(3)
    if which == ORDERING_FIRST:
        return GroupOrdering(s3, tuple(range(6)), "first")
    if which == ORDERING_SECOND:
        sequence = tuple(s3.index_of(label) for label in S3_SECOND_ORDER)
        return GroupOrdering(s3, sequence, "second")
    raise UsageError(f"unknown S3 ordering {which!r} (use first or second)")


def conjugacy_classes(group: FiniteGroup) -> ConjugacyPartition:
    """Orbits of g -> h g h^-1, in order of smallest member."""
    n = group.order
    table, inverses = group.table, group.inverses
    assigned = np.zeros(n, dtype=bool)
    classes: List[Tuple[int, ...]] = []
    for g in range(n):
        if assigned[g]:
            continue
        orbit = np.unique(table[table[:, g], inverses])
        assigned[orbit] = True
        classes.append(tuple(int(x) for x in orbit))
    return ConjugacyPartition(tuple(classes))


def direct_product(groups: Sequence[FiniteGroup]) -> FiniteGroup:
    """
    Componentwise product G_1 x ... x G_m.

    Elements are listed lexicographically in the factor orderings and
    labelled by joining the factor labels with commas.

    Raises:
        UsageError: For an empty list.
        CapacityError: If the full table would be too large.
    """
    factors = list(groups)
    if not factors:
        raise UsageError("direct_product needs at least one group")
    if len(factors) == 1:
        return factors[0]
    shape = tuple(g.order for g in factors)
    n = math.prod(shape)
    if n * n > MAX_PROJECTION_CELLS:
        raise CapacityError("direct product table", n * n, MAX_PROJECTION_CELLS)

    components = np.unravel_index(np.arange(n), shape)
    products = [
        g.table[comp[:, None], comp[None, :]]
        for g, comp in zip(factors, components)
    ]
    table = np.ravel_multi_index(products, shape)
    labels = [
        ",".join(g.elements[int(c[i])] for g, c in zip(factors, components))
        for i in range(n)
    ]
    name = " x ".join(g.name for g in factors)
    return FiniteGroup(name, labels, table)


def product_class_ids(groups: Sequence[FiniteGroup]) -> List[np.ndarray]:
    """Per-factor element -> class position maps, for classifying tuples."""
    return [g.classes().class_ids(g.order) for g in groups]


# =============================================================================
# Tags
# =============================================================================

_TAG_PATTERN = re.compile(r"^(Z|D)(\d+)$")


def group_from_tag(tag: str) -> FiniteGroup:
    """
    Build the group a file tag names: Zn, S3, S3b, D4, D5 or Dn.

    Raises:
        UsageError: For an unrecognized tag.
    """
    if tag == TAG_S3:
        return make_dihedral(3)
    if tag == TAG_S3_SECOND:
        return s3_ordering(ORDERING_SECOND).apply(tag=TAG_S3_SECOND)
    match = _TAG_PATTERN.match(tag)
    if match:
        kind, size = match.group(1), int(match.group(2))
        if kind == TAG_CYCLIC_PREFIX and size >= 2:
            return make_cyclic(size)
        if kind == TAG_DIHEDRAL_PREFIX and size >= 3:
            return make_dihedral(size)
    raise UsageError(f"unknown group tag {tag!r} (expected Zn, S3, S3b, D4, D5 or Dn)")


def tag_for(group: FiniteGroup) -> str:
    """The file tag of a group; plain symbol sets fall back to Z<order>."""
    return group.tag or f"{TAG_CYCLIC_PREFIX}{group.order}"
