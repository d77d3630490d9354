import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phase_ranger.numtheory import (
    coprime_count_exact,
    coprime_count_segments,
    gcd_set,
    mobius_sieve,
    multiples_in_segment,
    segments_from_candidates,
    zeta_inverse,
    zeta_inverse_tail_bound,
)

# 1/zeta(3) and 1/zeta(13) from mpmath at 30 digits
INV_ZETA3 = 0.831907372580707468683
INV_ZETA13 = 0.999877301709139524501


def brute_force_coprime(candidates, m):
    return sum(1 for t in itertools.product(candidates, repeat=m) if math.gcd(*t) == 1)


def mobius_by_trial_division(n):
    mu = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            mu = -mu
        p += 1
    return -mu if n > 1 else mu


class TestGcdSet:
    @pytest.mark.parametrize(
        "regs, expected", [({6, 10, 15}, 1), ({6, 12, 18}, 6), ({42}, 42), ([7, 7 * 11, 7 * 13], 7)]
    )
    def test_values(self, regs, expected):
        assert gcd_set(regs) == expected

    def test_empty(self):
        with pytest.raises(ValueError):
            gcd_set([])

    def test_non_positive(self):
        with pytest.raises(ValueError):
            gcd_set([4, 0])

    @given(st.lists(st.integers(1, 10**6), min_size=1, max_size=8))
    def test_is_greatest_common_divisor(self, regs):
        g = gcd_set(regs)
        assert all(k % g == 0 for k in regs)
        # nothing larger divides them all: the cofactors are coprime
        assert math.gcd(*[k // g for k in regs]) == 1


class TestMobius:
    def test_first_values(self):
        assert mobius_sieve(6).tolist() == [1, -1, -1, 0, -1, 1]

    def test_limit_one(self):
        assert mobius_sieve(1).tolist() == [1]

    def test_three_distinct_primes(self):
        assert mobius_sieve(30)[30] == -1

    def test_zero_limit(self):
        with pytest.raises(ValueError):
            mobius_sieve(0)

    def test_index_bounds(self):
        table = mobius_sieve(10)
        with pytest.raises(IndexError):
            table[11]
        with pytest.raises(IndexError):
            table[0]

    def test_matches_factorization(self):
        table = mobius_sieve(10**4)
        expected = [mobius_by_trial_division(n) for n in range(1, 10**4 + 1)]
        assert table.tolist() == expected

    def test_divisor_sum_vanishes(self):
        J = 10**4
        mu = mobius_sieve(J).values.astype(np.int64)
        acc = np.zeros(J + 1, dtype=np.int64)
        for d in range(1, J + 1):
            acc[d::d] += mu[d]
        assert acc[1] == 1
        assert not acc[2:].any()

    def test_read_only(self):
        with pytest.raises(ValueError):
            mobius_sieve(10).values[3] = 5


class TestZetaInverse:
    def test_m2_basel(self):
        val = zeta_inverse(2)
        assert abs(val - 6 / math.pi**2) <= zeta_inverse_tail_bound(2, 10**6)
        assert val == pytest.approx(0.607927, abs=5e-7)

    def test_m3_against_direct_zeta_sum(self):
        # independent route: zeta(3) summed term by term plus its tail integral
        J = 10**6
        j = np.arange(1, J + 1, dtype=np.float64)
        zeta3 = math.fsum((j**-3)[::-1]) + 0.5 * (J + 0.5) ** -2
        val = zeta_inverse(3, J)
        assert abs(val - 1 / zeta3) <= zeta_inverse_tail_bound(3, J) + 1e-15
        assert val == pytest.approx(INV_ZETA3, abs=1e-12)

    def test_m13(self):
        assert zeta_inverse(13) == pytest.approx(INV_ZETA13, abs=1e-12)

    @pytest.mark.parametrize("limit", [2, 10, 1000])
    def test_m20_close_to_one(self, limit):
        assert abs(1 - zeta_inverse(20, limit)) < 2 * 2.0**-20

    def test_rejects_m_below_two(self):
        with pytest.raises(ValueError):
            zeta_inverse(1)

    @pytest.mark.parametrize("m", [3, 4, 6, 9])
    @pytest.mark.parametrize("J", [10, 100, 5000])
    def test_tail_bound_between_truncations(self, m, J):
        assert abs(zeta_inverse(m, J) - zeta_inverse(m, 2 * J)) <= zeta_inverse_tail_bound(m, J)


class TestMultiples:
    def test_segment_bound_from_one(self):
        # for a segment starting at 1 the count is floor(N_l / j)
        for n_l in (1, 7, 100, 997):
            for j in range(1, 120):
                x = int(multiples_in_segment(1, n_l, j))
                assert x == n_l // j
                assert n_l / j - 1 <= x <= n_l / j

    @given(st.integers(1, 10**6), st.integers(0, 5000), st.integers(1, 3000))
    def test_arbitrary_segment(self, lo, length, j):
        hi = lo + length
        x = int(multiples_in_segment(lo, hi, j))
        assert x == sum(1 for k in range(lo, hi + 1) if k % j == 0)
        n_l = hi - lo + 1
        assert n_l // j <= x <= -(-n_l // j)


class TestCoprimeCount:
    def test_pair_example(self):
        res = coprime_count_exact({1, 2}, 2)
        assert (res.z, res.total) == (3, 4)
        assert res.probability == 0.75

    def test_all_even(self):
        assert coprime_count_exact({2, 4}, 3).z == 0

    def test_two_primes(self):
        res = coprime_count_exact({2, 3}, 3)
        assert (res.z, res.total) == (6, 8)

    def test_empty(self):
        with pytest.raises(ValueError):
            coprime_count_exact([], 3)

    def test_bad_m(self):
        with pytest.raises(ValueError):
            coprime_count_exact([1, 2], 0)

    def test_m_one_counts_ones(self):
        assert coprime_count_exact([1, 5, 9], 1).z == 1

    @settings(max_examples=150, deadline=None)
    @given(st.sets(st.integers(1, 60), min_size=1, max_size=12), st.integers(1, 4))
    def test_matches_enumeration(self, cands, m):
        assert coprime_count_exact(cands, m).z == brute_force_coprime(sorted(cands), m)

    def test_probability_is_exact_ratio(self):
        res = coprime_count_segments([(132000, 132000 + 2**15 - 1)], 5)
        assert res.total == (2**15) ** 5
        assert res.total > 2**64
        assert res.fraction == Fraction(res.z, res.total)
        assert res.probability == float(res.fraction)
        assert 0 <= res.z <= res.total

    def test_segment_form_equals_set_form(self):
        segs = [(5, 40), (100, 130), (977, 1001)]
        cands = [k for lo, hi in segs for k in range(lo, hi + 1)]
        assert coprime_count_segments(segs, 3) == coprime_count_exact(cands, 3)

    def test_overlapping_segments_rejected(self):
        with pytest.raises(ValueError):
            coprime_count_segments([(1, 10), (5, 20)], 3)

    @pytest.mark.parametrize("N", [100, 1000])
    @pytest.mark.parametrize("m", [3, 5, 10])
    def test_converges_to_inverse_zeta(self, N, m):
        p = coprime_count_exact(range(1, N + 1), m).probability
        assert abs(p - zeta_inverse(m)) <= 5 / N


def test_segments_from_candidates():
    assert segments_from_candidates([9, 1, 2, 3, 7, 8]) == [(1, 3), (7, 9)]
    with pytest.raises(ValueError):
        segments_from_candidates([1, 1])
