import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ovltest.errors import NotInvertibleError
from ovltest.fast_ovl2 import (
    IntPoly,
    TruncatedSeries,
    count_at_least,
    derivative,
    full_distribution,
    pvalue_fast,
    q_polys,
    series_inverse,
)
from ovltest.naive_dist import enumerate_distribution, pvalue_naive
from ovltest.samples import delta_walk
from tests.conftest import all_words

P = lambda *c: IntPoly(c)  # noqa: E731
Q = q_polys(64)


def walk_extremes(i):
    """Counter of (min delta, max delta) over all balanced words of size i."""
    if i == 0:
        return Counter({(0, 0): 1})
    out = Counter()
    for g in all_words(i, i):
        d = delta_walk(g)
        out[(min(d), max(d))] += 1
    return out


EXTREMES = {i: walk_extremes(i) for i in range(9)}


class TestPolynomials:
    def test_recurrence_examples(self):
        assert Q[2] == P(1, -1)
        assert Q[4] == P(1, -3, 1)
        assert Q[5] == P(1, -4, 3)

    def test_constant_term_and_degree(self):
        for k, qk in enumerate(Q):
            assert qk[0] == 1
            assert qk.degree == k // 2

    def test_closed_form_coefficients(self):
        for k, qk in enumerate(Q):
            assert qk.coeffs == tuple((-1) ** j * math.comb(k - j, j) for j in range(k // 2 + 1))

    def test_derivative(self):
        assert derivative(P(1, -3, 1)) == P(-3, 2)
        assert derivative(P(7)) == IntPoly()
        assert derivative(Q[2]) == P(-1)

    def test_inverse_examples(self):
        assert series_inverse(P(1, -1), 4).coeffs == (1, 1, 1, 1, 1)
        assert series_inverse(Q[3], 3).coeffs == (1, 2, 4, 8)
        with pytest.raises(NotInvertibleError):
            series_inverse(P(2, 1), 3)

    @given(st.lists(st.integers(-50, 50), min_size=0, max_size=8), st.integers(0, 25))
    def test_inverse_property(self, tail, order):
        p = IntPoly((1, *tail))
        inv = series_inverse(p, order)
        prod = inv * TruncatedSeries(p.coeffs, order)
        assert prod.coeffs == (1,) + (0,) * order


class TestIdentities:
    def test_product_recurrence(self):
        x2 = P(0, 0, 1)
        for k in range(1, 31):
            for l in range(1, 31):
                assert Q[k + 1] * Q[l + 1] - x2 * Q[k - 1] * Q[l - 1] == Q[k + l + 1]

    def test_convolution_is_derivative(self):
        for k in range(31):
            s = IntPoly()
            for i in range(k):
                s = s + Q[i] * Q[k - i - 1]
            assert s == -derivative(Q[k + 1])

    def test_bounded_walk_ogf(self):
        for k in range(6):
            for l in range(6):
                series = series_inverse(Q[k + l + 1], 8) * (Q[k] * Q[l])
                for i in range(9):
                    brute = sum(c for (lo, hi), c in EXTREMES[i].items() if -k <= lo and hi <= l)
                    assert series[i] == brute, (k, l, i)

    def test_range_class_ogf(self):
        for k in range(17):
            a = series_inverse(Q[k], 8) * derivative(Q[k + 1])
            b = series_inverse(Q[k + 1], 8) * derivative(Q[k + 2])
            for i in range(9):
                brute = sum(c for (lo, hi), c in EXTREMES[i].items() if hi - lo <= k)
                assert a[i] - b[i] == brute, (k, i)


class TestCounts:
    def test_examples(self):
        assert (count_at_least(1, 0), count_at_least(1, 1)) == (0, 2)
        assert (count_at_least(2, 0), count_at_least(2, 1), count_at_least(2, 2)) == (0, 2, 6)

    @pytest.mark.parametrize("n", [1, 5, 12, 30])
    def test_monotone_and_total(self, n):
        counts = [count_at_least(n, k) for k in range(n + 1)]
        assert counts == sorted(counts)
        assert counts[-1] == math.comb(2 * n, n)

    def test_pvalue_examples(self):
        assert pvalue_fast(2, 0).value == Fraction(2, 3)
        assert pvalue_fast(2, 1).value == 1
        for n in (1, 3, 50):
            assert pvalue_fast(n, n).value == 1


class TestFullDistribution:
    def test_small(self):
        d = full_distribution(1)
        assert (d.support, d.cum_counts, d.total) == ((0,), (2,), 2)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_matches_enumeration(self, n):
        assert full_distribution(n) == enumerate_distribution(n, n, 2)

    def test_matches_pvalue_fast(self):
        d = full_distribution(20)
        for k in range(21):
            assert pvalue_naive(d, Fraction(k, 20)) == pvalue_fast(20, k)
