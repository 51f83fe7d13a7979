import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ovltest.errors import InputError, SizeLimitError, UnequalSizesError
from ovltest.samples import RankSequence, ecdf_diff
from ovltest.statistic import (
    max_variation,
    max_variation_batch,
    rho2_range,
    rho_bruteforce,
    rho_dp,
    smirnov_d,
)
from tests.conftest import all_words

words = st.lists(st.integers(0, 1), min_size=2, max_size=80).filter(lambda b: 0 < sum(b) < len(b))


def R(*b):
    return RankSequence(b)


class TestExamples:
    def test_bruteforce(self):
        assert rho_bruteforce(R(0, 0, 1, 1), 1)[0] == 0
        value, cuts = rho_bruteforce(R(0, 1, 1, 0, 0, 1), 2)
        assert value == Fraction(1, 3)
        assert cuts == (1, 3)  # lexicographically first minimiser
        assert rho_bruteforce(R(0, 1, 0, 1), 1)[0] == Fraction(1, 2)

    def test_bruteforce_cap(self):
        with pytest.raises(SizeLimitError):
            rho_bruteforce(RankSequence([0, 1] * 15), 3, cost_cap=1000)

    @pytest.mark.parametrize("q", [1, 2, 3, 7])
    def test_separated_is_zero(self, q):
        assert rho_dp(R(0, 0, 0, 1, 1), q) == 0

    def test_dp_examples(self):
        assert rho_dp(R(0, 1, 1, 0, 0, 1), 2) == Fraction(1, 3)
        g = R(0, 1, 0, 1, 0, 1)
        assert rho_dp(g, 5) == rho_bruteforce(g, 5)[0]

    def test_range_examples(self):
        assert rho2_range(R(0, 1)) == 0
        assert rho2_range(R(0, 1, 1, 0, 0, 1)) == Fraction(1, 3)
        assert rho2_range(R(0, 1, 0, 1)) == Fraction(1, 2)
        with pytest.raises(UnequalSizesError):
            rho2_range(R(0, 0, 1))

    def test_smirnov_examples(self):
        assert smirnov_d(R(0, 0, 1, 1)) == 1
        assert smirnov_d(R(0, 1, 0, 1)) == Fraction(1, 2)
        assert smirnov_d(R(0, 0, 1)) == 1

    def test_q_validated(self):
        with pytest.raises(InputError):
            rho_dp(R(0, 1), 0)


class TestOracleEquivalence:
    @pytest.mark.parametrize("size", range(2, 11))
    def test_exhaustive_small(self, size):
        for n in range(1, size):
            for g in all_words(size - n, n):
                for q in (1, 2, 3, 4):
                    assert rho_dp(g, q) == rho_bruteforce(g, q)[0], (g, q)

    def test_random_medium(self):
        rng = random.Random(11)
        for _ in range(40):
            size = rng.randint(20, 40)
            n = rng.randint(1, size - 1)
            b = [0] * (size - n) + [1] * n
            rng.shuffle(b)
            g = RankSequence(b)
            for q in (1, 2):
                assert rho_dp(g, q) == rho_bruteforce(g, q)[0]

    def test_bigint_path_matches_int64(self):
        g = RankSequence([0, 1, 1, 0, 1, 0, 0, 0, 1])
        from ovltest.statistic import _max_variation_bigint, _scaled_walk, _max_variation_int64

        d, lcm = _scaled_walk(g)
        for q in (1, 2, 3):
            assert _max_variation_bigint(d.tolist(), q) == _max_variation_int64(d, q)

    def test_batch_matches_single(self):
        rng = np.random.default_rng(3)
        rows = np.array([rng.permutation([0] * 7 + [1] * 5) for _ in range(50)])
        for q in (1, 2, 3):
            got = max_variation_batch(rows, 7, 5, q)
            assert got.tolist() == [max_variation(RankSequence(r), q)[0] for r in rows]


class TestProperties:
    @given(words)
    def test_smirnov_identity(self, b):
        g = RankSequence(b)
        assert 1 - rho_dp(g, 1) == smirnov_d(g)
        assert smirnov_d(g) == max(abs(v) for v in ecdf_diff(g))

    @given(words, st.integers(1, 6))
    def test_monotone_in_q_and_bounded(self, b, q):
        g = RankSequence(b)
        hi, lo = rho_dp(g, q), rho_dp(g, q + 1)
        assert 0 <= lo <= hi <= 1

    @given(st.integers(1, 30).flatmap(lambda n: st.permutations([0] * n + [1] * n)), st.integers(1, 5))
    def test_value_grid_equal_sizes(self, b, q):
        g = RankSequence(b)
        assert (rho_dp(g, q) * g.n).denominator == 1

    @given(st.integers(1, 30).flatmap(lambda n: st.permutations([0] * n + [1] * n)))
    def test_range_formula(self, b):
        g = RankSequence(b)
        assert rho2_range(g) == rho_dp(g, 2)
