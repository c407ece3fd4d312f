"""Tests for resources/lib/design/numtheory.py: lcm bounds and the threshold d."""
import itertools
import math
import random

import pytest

from resources.lib.design.numtheory import (
    FactorSpec,
    PrimeOrder,
    bound_profile,
    compute_d,
    compute_L,
    gcd_of_subset,
    gcd_set,
    lcm_of_leave_one_out_products,
    lcm_prime_by_prime,
    lcm_set,
    ord_p,
    prime_orders,
    proper_fraction_feasible,
    witness_subsets_for_d,
)
from resources.lib.errors import UsageError


def _spec(*orders):
    return FactorSpec.of(*orders)


# ── FactorSpec ───────────────────────────────────────────────────────

class TestFactorSpec:
    def test_properties(self):
        spec = _spec(6, 2, 2)
        assert spec.k == 3
        assert spec.complete_size == 24
        assert spec.label == "6x2x2"
        assert str(spec) == "6x2x2"

    def test_order_below_two_rejected(self):
        with pytest.raises(UsageError, match="at least 2"):
            _spec(6, 1)

    def test_non_integer_rejected(self):
        with pytest.raises(UsageError):
            FactorSpec((6, 2.5))

    def test_bool_rejected(self):
        with pytest.raises(UsageError):
            FactorSpec((True, 2))

    def test_empty_rejected(self):
        with pytest.raises(UsageError):
            FactorSpec(())

    def test_position_matters(self):
        assert _spec(6, 2, 2) != _spec(2, 6, 2)

    def test_hashable(self):
        assert len({_spec(2, 2), _spec(2, 2), _spec(2, 3)}) == 2


# ── lcm / gcd primitives ─────────────────────────────────────────────

class TestLcmGcd:
    def test_lcm(self):
        assert lcm_set([4, 6, 10]) == 60

    def test_lcm_single(self):
        assert lcm_set([7]) == 7

    def test_gcd(self):
        assert gcd_set([12, 18, 27]) == 3

    def test_empty_rejected(self):
        with pytest.raises(UsageError):
            lcm_set([])
        with pytest.raises(UsageError):
            gcd_set([])

    def test_non_positive_rejected(self):
        with pytest.raises(UsageError):
            lcm_set([4, 0])

    def test_big_integers_exact(self):
        values = [2 ** 61 - 1, 2 ** 31 - 1, 10 ** 20]
        assert lcm_set(values) == (2 ** 61 - 1) * (2 ** 31 - 1) * 10 ** 20


class TestOrdP:
    def test_examples(self):
        assert ord_p(2, 48) == 4
        assert ord_p(3, 48) == 1
        assert ord_p(5, 48) == 0

    def test_non_prime_rejected(self):
        with pytest.raises(UsageError):
            ord_p(4, 48)

    def test_non_positive_rejected(self):
        with pytest.raises(UsageError):
            ord_p(2, 0)


class TestPrimeOrders:
    def test_factorization(self):
        assert prime_orders(360) == [PrimeOrder(2, 3), PrimeOrder(3, 2), PrimeOrder(5, 1)]

    def test_one_has_no_primes(self):
        assert prime_orders(1) == []

    def test_agrees_with_ord_p(self):
        for b in range(1, 200):
            for entry in prime_orders(b):
                assert ord_p(entry.prime, b) == entry.exponent


class TestLcmPrimeByPrime:
    def test_matches_lcm_set(self):
        rng = random.Random(7)
        for _ in range(200):
            values = [rng.randint(1, 500) for _ in range(rng.randint(1, 6))]
            assert lcm_prime_by_prime(values) == lcm_set(values)


class TestLeaveOneOut:
    def test_worked_example(self):
        # 8*12*18*27 / gcd = 46656 / 1
        assert lcm_of_leave_one_out_products([8, 12, 18, 27]) == 46656

    def test_common_factor(self):
        assert lcm_of_leave_one_out_products([4, 6]) == 12

    def test_needs_two_values(self):
        with pytest.raises(UsageError):
            lcm_of_leave_one_out_products([5])

    def test_random_agreement(self):
        rng = random.Random(11)
        for _ in range(200):
            values = [rng.randint(1, 60) for _ in range(rng.randint(2, 5))]
            assert lcm_of_leave_one_out_products(values) == math.prod(values) // gcd_set(values)


# ── L_t and d ────────────────────────────────────────────────────────

class TestComputeL:
    def test_worked_values(self):
        assert compute_L(_spec(6, 6, 6, 6), 2) == 36
        assert compute_L(_spec(3, 2, 2), 2) == 12

    def test_levels_3x2x2(self):
        assert [compute_L(_spec(3, 2, 2), t) for t in (1, 2, 3)] == [6, 12, 12]

    def test_levels_2x2x2(self):
        assert [compute_L(_spec(2, 2, 2), t) for t in (1, 2, 3)] == [2, 4, 8]

    def test_t1_is_lcm(self):
        assert compute_L(_spec(8, 12, 18, 27), 1) == 216

    def test_tk_is_complete_size(self):
        spec = _spec(8, 12, 18, 27)
        assert compute_L(spec, 4) == spec.complete_size == 46656

    def test_t_out_of_range(self):
        with pytest.raises(UsageError):
            compute_L(_spec(2, 2), 3)
        with pytest.raises(UsageError):
            compute_L(_spec(2, 2), 0)


class TestComputeD:
    def test_worked_values(self):
        assert compute_d(_spec(8, 12, 18, 27)) == 3
        assert compute_d(_spec(2, 3, 5, 6, 10, 15)) == 3

    def test_pairwise_coprime(self):
        assert compute_d(_spec(2, 3, 5, 7)) == 1

    def test_all_share_a_factor(self):
        assert compute_d(_spec(6, 4, 2)) == 3

    def test_single_factor(self):
        assert compute_d(_spec(5)) == 1

    @pytest.mark.parametrize("i,j", [(i, j) for i in range(0, 5) for j in range(0, 5) if i + j >= 1])
    def test_powers_of_two_and_three(self, i, j):
        spec = FactorSpec((2,) * i + (3,) * j)
        assert compute_d(spec) == max(i, j)


class TestWitnessSubsets:
    def test_four_factor_example(self):
        # {8,12,18} share 2, {12,18,27} share 3
        assert witness_subsets_for_d(_spec(8, 12, 18, 27)) == [(0, 1, 2), (1, 2, 3)]

    def test_six_factor_example(self):
        assert witness_subsets_for_d(_spec(2, 3, 5, 6, 10, 15)) == [(0, 3, 4), (1, 3, 5), (2, 4, 5)]

    def test_coprime_gives_singletons(self):
        assert witness_subsets_for_d(_spec(3, 4, 5)) == [(0,), (1,), (2,)]

    def test_gcd_of_subset(self):
        spec = _spec(8, 12, 18, 27)
        assert gcd_of_subset(spec, (1, 2, 3)) == 3
        assert gcd_of_subset(spec, (0, 3)) == 1

    def test_gcd_of_subset_bad_position(self):
        with pytest.raises(UsageError):
            gcd_of_subset(_spec(2, 2), (0, 2))

    def test_gcd_of_subset_empty(self):
        with pytest.raises(UsageError):
            gcd_of_subset(_spec(2, 2), ())


class TestBoundProfile:
    def test_profile(self):
        profile = bound_profile(_spec(3, 2, 2))
        assert profile.levels == (6, 12, 12)
        assert profile.d == 2
        assert profile.level(2) == 12
        assert profile.feasible(1) is True
        assert profile.feasible(2) is False

    def test_no_strength_three_fraction(self):
        spec = _spec(2, 3, 5, 6, 10, 15)
        assert proper_fraction_feasible(spec, 2) is True
        assert proper_fraction_feasible(spec, 3) is False
        assert compute_L(spec, 3) == 27000


# ── chain property over random specs ─────────────────────────────────

def _independent_d(orders):
    d = 1
    for size in range(2, len(orders) + 1):
        for subset in itertools.combinations(orders, size):
            if math.gcd(*subset) > 1:
                d = size
    return d


class TestChainProperty:
    def test_random_specs(self):
        rng = random.Random(20240521)
        for _ in range(1000):
            k = rng.randint(1, 6)
            orders = tuple(rng.randint(2, 12) for _ in range(k))
            spec = FactorSpec(orders)
            levels = [compute_L(spec, t) for t in range(1, k + 1)]
            d = _independent_d(orders)
            assert compute_d(spec) == d, orders
            for t in range(1, k):
                assert levels[t] % levels[t - 1] == 0, orders
                if t < d:
                    assert levels[t - 1] < levels[t], orders
                else:
                    assert levels[t - 1] == levels[t], orders
            assert levels[-1] == spec.complete_size
            assert bound_profile(spec).levels == tuple(levels)

    def test_prime_by_prime_route(self):
        rng = random.Random(99)
        for _ in range(200):
            k = rng.randint(1, 5)
            spec = FactorSpec(tuple(rng.randint(2, 12) for _ in range(k)))
            for t in range(1, k + 1):
                products = [math.prod(s) for s in itertools.combinations(spec.orders, t)]
                assert lcm_prime_by_prime(products) == compute_L(spec, t)
