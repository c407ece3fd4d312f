"""Tests for resources/lib/design/oarray.py: the array model and both verifiers."""
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from resources.lib.design.constructions import construct
from resources.lib.design.groups import make_cyclic, make_dihedral
from resources.lib.design.numtheory import FactorSpec, compute_L
from resources.lib.design.oarray import (
    OrthogonalArray,
    complete_factorial,
    count_projection_naive,
    cyclic_groups,
    divisibility_check,
    has_repeats,
    is_proper_fraction,
    max_strength,
    strength1_noncomplete,
    verify_conjugacy,
    verify_strength,
)
from resources.lib.errors import CapacityError, UsageError


def _parity_half(k=3):
    """Even-parity half of 2^k."""
    runs = [r for r in itertools.product((0, 1), repeat=k) if sum(r) % 2 == 0]
    return OrthogonalArray(FactorSpec((2,) * k), np.array(runs).T)


# ── OrthogonalArray model ────────────────────────────────────────────

class TestOrthogonalArray:
    def test_shape(self, twelve_run_array):
        assert twelve_run_array.k == 3
        assert twelve_run_array.N == 12
        assert twelve_run_array.spec == FactorSpec.of(3, 2, 2)
        assert twelve_run_array.tags == ("Z3", "Z2", "Z2")

    def test_plain_array_gets_cyclic_tags(self):
        array = _parity_half()
        assert array.groups is None
        assert array.tags == ("Z2", "Z2", "Z2")

    def test_matrix_read_only(self, twelve_run_array):
        with pytest.raises(ValueError):
            twelve_run_array.matrix[0, 0] = 1

    def test_entry_out_of_range(self):
        with pytest.raises(UsageError, match="0..1"):
            OrthogonalArray(FactorSpec.of(2, 2), np.array([[0, 1], [0, 2]]))

    def test_wrong_row_count(self):
        with pytest.raises(UsageError):
            OrthogonalArray(FactorSpec.of(2, 2), np.array([[0, 1]]))

    def test_groups_must_match_symbols(self):
        with pytest.raises(UsageError):
            OrthogonalArray(FactorSpec.of(2), np.array([[0, 1]]),
                            symbol_sets=[("a", "b")], groups=[make_cyclic(2)])

    def test_from_labels(self):
        s3 = make_dihedral(3)
        array = OrthogonalArray.from_labels(
            [["e", "x", "a"], ["1", "0", "1"]],
            [s3.elements, ("0", "1")],
        )
        assert array.spec == FactorSpec.of(6, 2)
        assert array.column(1) == (1, 0)
        assert array.label_rows() == [["e", "x", "a"], ["1", "0", "1"]]

    def test_from_labels_unknown_symbol(self):
        with pytest.raises(UsageError, match="unknown symbol"):
            OrthogonalArray.from_labels([["0", "7"]], [("0", "1")])

    def test_from_labels_ragged(self):
        with pytest.raises(UsageError):
            OrthogonalArray.from_labels([["0", "1"], ["0"]], [("0", "1"), ("0", "1")])

    def test_multiplicities(self, twelve_run_array):
        counts = twelve_run_array.multiplicities()
        assert counts[(0, 0, 0)] == 2
        assert counts[(1, 0, 0)] == 1
        assert sum(counts.values()) == 12

    def test_permuted_columns_same_multiset(self, twelve_run_array):
        order = list(range(12))[::-1]
        permuted = twelve_run_array.with_columns_permuted(order)
        assert permuted != twelve_run_array
        assert permuted.multiplicities() == twelve_run_array.multiplicities()
        assert permuted.column(0) == twelve_run_array.column(11)

    def test_permutation_checked(self, twelve_run_array):
        with pytest.raises(UsageError):
            twelve_run_array.with_columns_permuted([0] * 12)

    def test_equality_and_hash(self, twelve_run_array):
        same = OrthogonalArray(twelve_run_array.spec, twelve_run_array.matrix.copy())
        assert same == twelve_run_array
        assert hash(same) == hash(twelve_run_array)

    def test_fraction(self):
        assert _parity_half().fraction() == Fraction(1, 2)


# ── verify_strength ──────────────────────────────────────────────────

class TestVerifyStrength:
    def test_twelve_run_strength_two(self, twelve_run_array):
        report = verify_strength(twelve_run_array, 2)
        assert report.holds
        assert report.lambdas == {(0, 1): 2, (0, 2): 2, (1, 2): 3}
        assert report.witness is None

    def test_twelve_run_fails_strength_three(self, twelve_run_array):
        report = verify_strength(twelve_run_array, 3)
        assert not report.holds
        w = report.witness
        assert w.subset == (0, 1, 2)
        assert (w.cell_a, w.count_a) == ((0, 0, 0), 2)
        assert (w.cell_b, w.count_b) == ((0, 0, 1), 0)
        assert w.describe(twelve_run_array) == "factors {1,2,3}: (0,0,0) occurs 2x, (0,0,1) occurs 0x"

    def test_max_strength(self, twelve_run_array):
        assert max_strength(twelve_run_array) == 2

    def test_parity_half(self):
        half = _parity_half()
        assert verify_strength(half, 2).holds
        assert not verify_strength(half, 3).holds
        assert max_strength(half) == 2

    def test_complete_factorial_full_strength(self):
        array = complete_factorial(FactorSpec.of(3, 2, 4))
        assert array.N == 24
        assert max_strength(array) == 3

    def test_strength_zero_when_unbalanced(self):
        array = OrthogonalArray(FactorSpec.of(2, 2), np.array([[0, 0], [0, 1]]))
        assert max_strength(array) == 0

    def test_t_out_of_range(self, twelve_run_array):
        with pytest.raises(UsageError):
            verify_strength(twelve_run_array, 4)
        with pytest.raises(UsageError):
            verify_strength(twelve_run_array, 0)

    def test_naive_recount_agrees(self, twelve_run_array):
        for t in (1, 2):
            report = verify_strength(twelve_run_array, t)
            for subset, lam in report.lambdas.items():
                counts = count_projection_naive(twelve_run_array, subset)
                assert set(counts.values()) == {lam}

    def test_naive_recount_finds_witness(self, twelve_run_array):
        counts = count_projection_naive(twelve_run_array, (0, 1, 2))
        assert counts[(0, 0, 0)] == 2
        assert counts[(0, 0, 1)] == 0
        assert len(counts) == 12


# ── verify_conjugacy ─────────────────────────────────────────────────

class TestVerifyConjugacy:
    def test_complete_factorial_holds(self):
        groups = [make_dihedral(3), make_cyclic(2)]
        array = complete_factorial(FactorSpec.of(6, 2), groups=groups)
        report = verify_conjugacy(array, groups)
        assert report.holds
        assert report.classes_checked == 6

    def test_missing_conjugate(self):
        d4 = make_dihedral(4)
        groups = [d4, make_cyclic(2), make_cyclic(2)]
        array = OrthogonalArray.from_labels([["r"], ["0"], ["0"]], [g.elements for g in groups])
        report = verify_conjugacy(array, groups)
        assert not report.holds
        assert report.witness.run_a == (d4.index_of("r"), 0, 0)
        assert report.witness.run_b == (d4.index_of("s"), 0, 0)
        assert report.witness.describe(groups) == "(r,0,0) occurs 1x but conjugate (s,0,0) occurs 0x"

    def test_unequal_multiplicities(self):
        groups = [make_dihedral(3), make_cyclic(2)]
        array = OrthogonalArray.from_labels(
            [["x", "x", "y"], ["0", "0", "0"]], [g.elements for g in groups]
        )
        report = verify_conjugacy(array, groups)
        assert not report.holds
        assert (report.witness.count_a, report.witness.count_b) == (2, 1)

    def test_abelian_groups_always_hold(self, twelve_run_array):
        assert verify_conjugacy(twelve_run_array, cyclic_groups(twelve_run_array.spec)).holds

    def test_symbol_mismatch(self, twelve_run_array):
        groups = [make_dihedral(3), make_cyclic(2), make_cyclic(2)]
        with pytest.raises(UsageError):
            verify_conjugacy(twelve_run_array, groups)

    def test_group_count_mismatch(self, twelve_run_array):
        with pytest.raises(UsageError):
            verify_conjugacy(twelve_run_array, [make_cyclic(3)])


# ── repeats, proper fractions, divisibility ──────────────────────────

class TestProperFraction:
    def test_twelve_run_has_repeats(self, twelve_run_array):
        assert has_repeats(twelve_run_array)
        assert not is_proper_fraction(twelve_run_array)

    def test_parity_half_is_proper(self):
        half = _parity_half()
        assert not has_repeats(half)
        assert is_proper_fraction(half)

    def test_complete_is_not_proper(self):
        assert not is_proper_fraction(complete_factorial(FactorSpec.of(2, 2)))


class TestDivisibility:
    def test_holds(self, twelve_run_array):
        assert divisibility_check(twelve_run_array, 2)
        assert twelve_run_array.N % compute_L(twelve_run_array.spec, 2) == 0

    def test_reuses_report(self, twelve_run_array):
        report = verify_strength(twelve_run_array, 1)
        assert divisibility_check(twelve_run_array, 1, report)

    def test_needs_strength(self, twelve_run_array):
        with pytest.raises(UsageError):
            divisibility_check(twelve_run_array, 3)


# ── complete_factorial and strength1_noncomplete ─────────────────────

class TestCompleteFactorial:
    def test_lexicographic(self):
        array = complete_factorial(FactorSpec.of(2, 3))
        assert array.columns() == list(itertools.product(range(2), range(3)))

    def test_capacity(self):
        with pytest.raises(CapacityError):
            complete_factorial(FactorSpec.of(10, 10, 10), capacity_limit=999)


class TestStrengthOneNoncomplete:
    def test_properties(self):
        spec = FactorSpec.of(2, 3)
        array = strength1_noncomplete(spec, seed=5)
        assert array.N == spec.complete_size
        assert verify_strength(array, 1).holds
        assert has_repeats(array)

    def test_deterministic(self):
        spec = FactorSpec.of(2, 2, 2)
        assert strength1_noncomplete(spec, seed=3) == strength1_noncomplete(spec, seed=3)

    def test_single_factor_rejected(self):
        with pytest.raises(UsageError):
            strength1_noncomplete(FactorSpec.of(4), seed=0)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            strength1_noncomplete(FactorSpec.of(10, 10), seed=0, capacity_limit=50)


# ── random arrays ────────────────────────────────────────────────────

def _small_specs():
    """Every spec with at most three factors and at most 32 runs in the complete design."""
    specs = []
    for k in (1, 2, 3):
        for orders in itertools.combinations_with_replacement(range(16, 1, -1), k):
            if math.prod(orders) <= 32:
                specs.append(FactorSpec(orders))
    return specs


def _random_arrays(spec, rng):
    total = spec.complete_size
    full = complete_factorial(spec).matrix
    arrays = [OrthogonalArray(spec, np.tile(full, int(rng.integers(1, 3))))]
    # independently shuffled balanced rows have strength 1 at least
    N = math.lcm(*spec.orders) * int(rng.integers(1, 4))
    rows = [rng.permutation(np.repeat(np.arange(s), N // s)) for s in spec.orders]
    arrays.append(OrthogonalArray(spec, np.stack(rows)))
    for _ in range(4):
        picks = rng.integers(0, total, size=int(rng.integers(1, 2 * total + 1)))
        arrays.append(OrthogonalArray(spec, full[:, picks]))
    if spec.k > 1:
        arrays.append(strength1_noncomplete(spec, seed=int(rng.integers(0, 1000))))
    return arrays


def _holds_by_recount(array, t):
    return all(
        len(set(count_projection_naive(array, subset).values())) == 1
        for subset in itertools.combinations(range(array.k), t)
    )


SMALL_SPECS = _small_specs()


class TestRandomArrays:
    @pytest.mark.parametrize("spec", SMALL_SPECS, ids=lambda s: s.label)
    def test_fast_check_matches_recount(self, spec):
        rng = np.random.default_rng(list(spec.orders))
        for array in _random_arrays(spec, rng):
            for t in range(1, spec.k + 1):
                report = verify_strength(array, t)
                assert report.holds == _holds_by_recount(array, t), (array.columns(), t)
                if report.holds:
                    for subset, lam in report.lambdas.items():
                        assert set(count_projection_naive(array, subset).values()) == {lam}

    @pytest.mark.parametrize("spec", SMALL_SPECS, ids=lambda s: s.label)
    def test_strength_is_monotone(self, spec):
        rng = np.random.default_rng(list(spec.orders))
        for array in _random_arrays(spec, rng):
            holds = [verify_strength(array, t).holds for t in range(1, spec.k + 1)]
            top = max_strength(array)
            assert holds[:top] == [True] * top
            assert not any(holds[top:])

    @pytest.mark.parametrize("spec", SMALL_SPECS, ids=lambda s: s.label)
    def test_divisibility_whenever_strength_holds(self, spec):
        rng = np.random.default_rng(list(spec.orders))
        for array in _random_arrays(spec, rng):
            for t in range(1, spec.k + 1):
                report = verify_strength(array, t)
                if report.holds:
                    assert divisibility_check(array, t, report)
                    assert array.N % compute_L(spec, t) == 0
                else:
                    with pytest.raises(UsageError):
                        divisibility_check(array, t, report)

    def test_specs_cover_passing_and_failing_arrays(self):
        outcomes = set()
        for spec in SMALL_SPECS:
            rng = np.random.default_rng(list(spec.orders))
            for array in _random_arrays(spec, rng):
                outcomes.add(verify_strength(array, spec.k).holds)
        assert outcomes == {True, False}
        assert len(SMALL_SPECS) == 57

    def test_conjugacy_ignores_column_order_when_it_holds(self):
        array = construct(FactorSpec.of(8, 2, 2))
        base = verify_conjugacy(array, array.groups)
        assert base.holds
        rng = np.random.default_rng(822)
        for _ in range(6):
            shuffled = array.with_columns_permuted(rng.permutation(array.N))
            assert verify_conjugacy(shuffled, array.groups) == base

    def test_conjugacy_ignores_column_order_when_it_fails(self):
        groups = [make_dihedral(4), make_cyclic(2), make_cyclic(2)]
        array = OrthogonalArray.from_labels(
            [["r", "e", "e", "q"], ["0", "0", "1", "1"], ["0", "0", "1", "0"]],
            [g.elements for g in groups],
        )
        base = verify_conjugacy(array, groups)
        assert not base.holds
        rng = np.random.default_rng(4)
        for _ in range(6):
            shuffled = array.with_columns_permuted(rng.permutation(array.N))
            assert verify_conjugacy(shuffled, groups) == base
