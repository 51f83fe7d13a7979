"""Exact null distributions by enumeration, band counting and Monte Carlo.

Under the null hypothesis every rank sequence with ``m`` zeros and ``n``
ones is equally likely, so ``P(rho_q <= x)`` is a ratio of counts over the
``C(m+n, m)`` sequences.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Literal, Sequence

import numpy as np

from . import _rng
from .errors import CostCapError, InputError
from .samples import RankSequence
from .statistic import _INT64_SAFE, max_variation_batch, rho_dp

DEFAULT_COST_CAP = 10**7
CSV_HEADER = ("value_num", "value_den", "cum_count")


def as_fraction(x) -> Fraction:
    """Exact value of ``x``; floats are read through their shortest repr."""
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InputError(f"non-finite value {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise InputError(f"cannot interpret {x!r} as a rational number")


@dataclass(frozen=True)
class Probability:
    value: Fraction
    source: Literal["exact", "monte_carlo"] = "exact"
    trials: int | None = None
    std_error: float | None = None

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise InputError(f"probability out of range: {self.value}")

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class ExactDistribution:
    """Step CDF of the statistic: ``cum_counts[i] = #{rho <= support[i]}``."""

    support: tuple[Fraction, ...]
    cum_counts: tuple[int, ...]
    total: int
    m: int
    n: int
    q: int

    def __post_init__(self):
        if len(self.support) != len(self.cum_counts) or not self.support:
            raise InputError("support and cum_counts must be nonempty and aligned")
        if any(a >= b for a, b in zip(self.support, self.support[1:])):
            raise InputError("support must be strictly ascending")
        if any(a >= b for a, b in zip(self.cum_counts, self.cum_counts[1:])):
            raise InputError("cum_counts must be strictly increasing")
        if self.cum_counts[0] <= 0 or self.cum_counts[-1] != self.total:
            raise InputError("last cumulative count must equal the total")
        if self.total != math.comb(self.m + self.n, self.m):
            raise InputError("total must equal C(m+n, m)")

    def count_le(self, x) -> int:
        x = as_fraction(x)
        lo, hi = 0, len(self.support)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.support[mid] <= x:
                lo = mid + 1
            else:
                hi = mid
        return self.cum_counts[lo - 1] if lo else 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for v, c in zip(self.support, self.cum_counts):
            w.writerow((v.numerator, v.denominator, c))
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, m: int, n: int, q: int) -> "ExactDistribution":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or tuple(rows[0]) != CSV_HEADER:
            raise InputError(f"distribution CSV must start with {','.join(CSV_HEADER)}")
        try:
            support = tuple(Fraction(int(r[0]), int(r[1])) for r in rows[1:])
            counts = tuple(int(r[2]) for r in rows[1:])
        except (ValueError, IndexError, ZeroDivisionError) as exc:
            raise InputError(f"malformed distribution CSV: {exc}") from None
        return cls(support, counts, math.comb(m + n, m), m, n, q)


def _from_histogram(hist: Sequence[int], scale: int, m: int, n: int, q: int) -> ExactDistribution:
    """Build a distribution from counts of ``V`` where ``rho = 1 - V / scale``."""
    support, counts, running = [], [], 0
    for v in range(len(hist) - 1, -1, -1):  # ascending rho
        c = int(hist[v])
        if c:
            running += c
            support.append(1 - Fraction(v, scale))
            counts.append(running)
    return ExactDistribution(tuple(support), tuple(counts), math.comb(m + n, m), m, n, q)


def _check_sizes(m: int, n: int, q: int = 1) -> None:
    for name, v in (("m", m), ("n", n), ("q", q)):
        if not isinstance(v, (int, np.integer)) or v < 1:
            raise InputError(f"{name} must be a positive integer, got {v!r}")


def enumerate_distribution(
    m: int, n: int, q: int, cost_cap: int = DEFAULT_COST_CAP
) -> ExactDistribution:
    """Exact null distribution of the OVL-q statistic by full enumeration."""
    from ._kernels import variation_histogram

    _check_sizes(m, n, q)
    required = math.comb(m + n, m)
    if required > cost_cap:
        raise CostCapError(required, cost_cap)
    lcm = math.lcm(m, n)
    if 2 * (q + 2) * lcm >= _INT64_SAFE:
        raise InputError("sizes too large for the enumeration kernel")
    hist = variation_histogram(m, n, q, np.zeros(2 * lcm + 1, dtype=np.int64))
    return _from_histogram(hist, 2 * lcm, m, n, q)


def pvalue_naive(dist: ExactDistribution, x) -> Probability:
    return Probability(Fraction(dist.count_le(x), dist.total))


def count_inside_band(m: int, n: int, width) -> int:
    """Lattice paths (0,0) -> (m,n) with ``|a/m - b/n| < width`` at every vertex.

    Vertex ``(a, b)`` means ``a`` zeros and ``b`` ones seen so far. Only the
    cells inside the band are visited, so the cost is ``O(m * band width)``.
    """
    width = as_fraction(width)
    num, den = width.numerator, width.denominator
    if num <= 0:
        return 0
    # den * |a n - b m| < num * m * n
    bound, step = num * m * n, m * den
    prev = [0] * (n + 1)
    for a in range(m + 1):
        s = a * n * den
        lo = max(0, (s - bound) // step + 1)
        hi = min(n, (s + bound - 1) // step)
        row = [0] * (n + 1)
        for b in range(lo, hi + 1):
            if a == 0 and b == 0:
                row[0] = 1
            else:
                row[b] = prev[b] + (row[b - 1] if b else 0)
        prev = row
    return prev[n]


def pvalue_ovl1_band(m: int, n: int, x) -> Probability:
    """Exact ``P(rho_1 <= x)``: the complement of paths that keep the
    Smirnov distance strictly below ``1 - x``."""
    _check_sizes(m, n)
    x = as_fraction(x)
    total = math.comb(m + n, m)
    inside = count_inside_band(m, n, 1 - x)
    return Probability(Fraction(total - inside, total))


def pvalue_montecarlo(
    m: int, n: int, q: int, x, trials: int, seed: int, chunk: int = 20000
) -> Probability:
    """Fraction of uniformly shuffled rank sequences with ``rho_q <= x``."""
    _check_sizes(m, n, q)
    if trials < 1:
        raise InputError("trials must be positive")
    x = as_fraction(x)
    rng = _rng.stream(seed)
    base = np.array([0] * m + [1] * n, dtype=np.int8)
    scale = 2 * math.lcm(m, n)
    hits = 0
    if 2 * (q + 2) * (scale // 2) < _INT64_SAFE:
        # rho <= x  <=>  V * den >= (den - num) * scale
        need = (x.denominator - x.numerator) * scale
        done = 0
        while done < trials:
            k = min(chunk, trials - done)
            bits = rng.permuted(np.tile(base, (k, 1)), axis=1)
            v = max_variation_batch(bits, m, n, q)
            hits += sum(1 for vi in v.tolist() if vi * x.denominator >= need)
            done += k
    else:
        for _ in range(trials):
            gamma = RankSequence(rng.permutation(base))
            hits += rho_dp(gamma, q) <= x
    p = hits / trials
    return Probability(
        Fraction(hits, trials), "monte_carlo", trials, math.sqrt(p * (1 - p) / trials)
    )


def ci_lower(
    dist_or_pfunc: ExactDistribution | Callable[[Fraction], Probability | Fraction],
    alpha,
    grid: Sequence[Fraction] | None = None,
) -> Fraction:
    """Lower confidence limit ``sup {x : p(x) < alpha}``.

    For a step CDF this is the smallest attainable value ``t`` with
    ``p(t) >= alpha``. A p-value function must come with an ascending grid
    containing every attainable value (and ending where ``p = 1``).
    """
    alpha = as_fraction(alpha)
    if not 0 < alpha < 1:
        raise InputError(f"alpha must lie in (0, 1), got {alpha}")
    if isinstance(dist_or_pfunc, ExactDistribution):
        d = dist_or_pfunc
        for v, c in zip(d.support, d.cum_counts):
            if Fraction(c, d.total) >= alpha:
                return v
        return d.support[-1]
    if grid is None:
        raise InputError("a p-value function needs a grid of attainable values")

    def p(x):
        r = dist_or_pfunc(x)
        return r.value if isinstance(r, Probability) else Fraction(r)

    lo, hi = 0, len(grid) - 1
    if p(grid[hi]) < alpha:
        return grid[hi]
    while lo < hi:
        mid = (lo + hi) // 2
        if p(grid[mid]) >= alpha:
            hi = mid
        else:
            lo = mid + 1
    return grid[lo]
