"""Fast exact OVL-2 null distribution for equal sample sizes.

The polynomials ``Q_0 = Q_1 = 1``, ``Q_{k+2} = Q_{k+1} - x Q_k`` generate the
walks with bounded delta range: for a balanced word of length ``2n``

    #{range <= k} = [x^n] (Q'_{k+1} / Q_k - Q'_{k+2} / Q_{k+1})

and ``rho_2 = 1 - range / n``. Every ``Q_k`` has constant term 1, so the
divisions are carried out in the ring of integer power series truncated at
order ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from operator import mul
from typing import Iterable, Sequence

from .errors import InputError, NotInvertibleError
from .naive_dist import ExactDistribution, Probability


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, ``coeffs[i]`` is the coefficient of ``x**i``."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(int(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: "IntPoly") -> "IntPoly":
        size = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self[i] + other[i] for i in range(size))

    def __neg__(self) -> "IntPoly":
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    def shift(self, k: int) -> "IntPoly":
        """Multiply by ``x**k``."""
        return IntPoly((0,) * k + self.coeffs) if self.coeffs else self


@dataclass(frozen=True)
class TruncatedSeries:
    """Integer power series known up to and including ``x**order``."""

    coeffs: tuple[int, ...]
    order: int

    def __post_init__(self):
        c = tuple(int(v) for v in self.coeffs[: self.order + 1])
        object.__setattr__(self, "coeffs", c + (0,) * (self.order + 1 - len(c)))

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i <= self.order else 0

    def __mul__(self, other: "TruncatedSeries | IntPoly") -> "TruncatedSeries":
        order = self.order if isinstance(other, IntPoly) else min(self.order, other.order)
        oc = other.coeffs
        out = [0] * (order + 1)
        for i, a in enumerate(self.coeffs[: order + 1]):
            if a:
                for j, b in enumerate(oc[: order + 1 - i]):
                    out[i + j] += a * b
        return TruncatedSeries(tuple(out), order)

    def coefficient_of_product(self, p: IntPoly, k: int) -> int:
        """``[x^k] (self * p)`` without forming the product."""
        return sum(p[i] * self[k - i] for i in range(min(p.degree, k) + 1))


def q_polys(k_max: int) -> list[IntPoly]:
    """``Q_0, ..., Q_{k_max}``."""
    if k_max < 0:
        raise InputError("k_max must be nonnegative")
    out = [IntPoly((1,)), IntPoly((1,))]
    for _ in range(2, k_max + 1):
        out.append(out[-1] - out[-2].shift(1))
    return out[: k_max + 1]


def _q_triple(k: int) -> tuple[IntPoly, IntPoly, IntPoly]:
    """``Q_k, Q_{k+1}, Q_{k+2}`` keeping only two predecessors in memory."""
    a, b = [1], [1]  # Q_0, Q_1
    for _ in range(k):
        nxt = b + [0] * (len(a) + 1 - len(b))
        for i, c in enumerate(a):
            nxt[i + 1] -= c
        a, b = b, nxt
    c = b + [0] * (len(a) + 1 - len(b))
    for i, v in enumerate(a):
        c[i + 1] -= v
    return IntPoly(a), IntPoly(b), IntPoly(c)


def derivative(p: IntPoly) -> IntPoly:
    return IntPoly(i * c for i, c in enumerate(p.coeffs) if i)


def series_inverse(p: IntPoly, order: int) -> TruncatedSeries:
    """``1 / p`` to the given order, for ``p`` with constant term 1.

    Uses ``c_j = -sum_{t>=1} p_t c_{j-t}``, so each coefficient costs
    ``deg p`` multiplications.
    """
    if p[0] != 1:
        raise NotInvertibleError(f"constant term must be 1, got {p[0]}")
    if order < 0:
        raise InputError("order must be nonnegative")
    tail = [-c for c in p.coeffs[1:]]  # -p_1, -p_2, ...
    deg = len(tail)
    c = [1]
    for j in range(1, order + 1):
        if j > deg:
            window = c[j - 1 : j - 1 - deg : -1]
        else:
            window = c[j - 1 :: -1]
        c.append(sum(map(mul, tail, window)))
    return TruncatedSeries(tuple(c), order)


def _ratio_coefficient(num: IntPoly, den: IntPoly, n: int) -> int:
    """``[x^n] num / den``."""
    return series_inverse(den, n).coefficient_of_product(num, n)


def _check_nk(n: int, k: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    if not isinstance(k, int) or not 0 <= k <= n:
        raise InputError(f"k must be an integer in [0, {n}], got {k!r}")


def count_at_least(n: int, k: int) -> int:
    """``#{gamma in Gamma_{n,n} : rho_2 >= 1 - k/n}`` (delta range at most ``k``)."""
    _check_nk(n, k)
    qk, qk1, qk2 = _q_triple(k)
    return _ratio_coefficient(derivative(qk1), qk, n) - _ratio_coefficient(
        derivative(qk2), qk1, n
    )


def pvalue_fast(n: int, k: int) -> Probability:
    """Exact ``p_{2,n,n}(k/n) = P(rho_2 <= k/n)``."""
    _check_nk(n, k)
    if k == n:
        return Probability(Fraction(1))
    total = math.comb(2 * n, n)
    return Probability(1 - Fraction(count_at_least(n, n - k - 1), total))


def full_distribution(n: int) -> ExactDistribution:
    """Whole OVL-2 null distribution for ``m = n`` in the enumeration schema."""
    _check_nk(n, 0)
    polys = q_polys(n + 2)
    # head[j] = [x^n] Q'_{j+1} / Q_j, so #{range <= j} = head[j] - head[j+1]
    head = [
        _ratio_coefficient(derivative(polys[j + 1]), polys[j], n) for j in range(n + 1)
    ]
    at_most = [head[j] - head[j + 1] for j in range(n)]
    at_most.append(math.comb(2 * n, n))
    support, counts = [], []
    # rho_2 = k/n  <=>  range = n - k; #{rho <= k/n} = #{range >= n - k}
    total = math.comb(2 * n, n)
    for k in range(n + 1):
        r = n - k
        c = total - (at_most[r - 1] if r >= 1 else 0)
        if c and (not counts or c > counts[-1]):
            support.append(Fraction(k, n))
            counts.append(c)
    return ExactDistribution(tuple(support), tuple(counts), total, n, n, 2)
