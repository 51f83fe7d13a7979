"""The OVL-q statistic of a rank sequence, computed exactly.

Three routes are provided:

* :func:`rho_bruteforce` minimises the segmented sum of ECDF increment minima
  over every cut vector. It is the reference oracle and costs
  ``C(m+n+q, q)`` evaluations.
* :func:`rho_dp` is the production route. Writing ``min(a, b) =
  (a + b - |a - b|) / 2`` and telescoping, the segmented sum for a cut vector
  equals ``1 - V/2`` where ``V`` is the total variation of the ECDF
  difference walk sampled at ``0, j_1, ..., j_q, m+n``. Maximising that
  total variation over nondecreasing cut vectors is a prefix-maximum
  dynamic program in ``O(q (m+n))``.
* :func:`rho2_range` is the closed form for ``q = 2`` and ``m = n``: one
  minus the range of the delta walk divided by ``n``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .errors import InputError, SizeLimitError
from .samples import RankSequence, delta_walk

BRUTEFORCE_CAP = 10**6
_INT64_SAFE = 2**62


def _check_q(q: int) -> None:
    if not isinstance(q, (int, np.integer)) or q < 1:
        raise InputError(f"q must be a positive integer, got {q!r}")


def rho_bruteforce(
    gamma: RankSequence, q: int, cost_cap: int = BRUTEFORCE_CAP
) -> tuple[Fraction, tuple[int, ...]]:
    """Minimum of the segmented sum over all cut vectors.

    Returns the value and the lexicographically smallest minimising cut
    vector ``(j_1, ..., j_q)``.
    """
    _check_q(q)
    m, n, size = gamma.m, gamma.n, len(gamma)
    cost = math.comb(size + q, q)
    if cost > cost_cap:
        raise SizeLimitError(cost, cost_cap)
    # ECDFs on the common denominator m*n
    b = gamma.bits.tolist()
    f0 = [0]
    f1 = [0]
    for bit in b:
        f0.append(f0[-1] + (0 if bit else n))
        f1.append(f1[-1] + (m if bit else 0))
    best, best_cuts = None, None
    for cuts in itertools.combinations_with_replacement(range(size + 1), q):
        pts = (0, *cuts, size)
        total = 0
        for lo, hi in zip(pts, pts[1:]):
            total += min(f0[hi] - f0[lo], f1[hi] - f1[lo])
        if best is None or total < best:
            best, best_cuts = total, cuts
    return Fraction(best, m * n), tuple(best_cuts)


def _scaled_walk(gamma: RankSequence) -> tuple[np.ndarray, int]:
    """ECDF difference walk times ``L = lcm(m, n)``, as integers."""
    m, n = gamma.m, gamma.n
    lcm = math.lcm(m, n)
    up, down = lcm // m, lcm // n
    steps = np.where(gamma.bits == 1, -down, up).astype(np.int64)
    d = np.zeros(len(gamma) + 1, dtype=np.int64)
    np.cumsum(steps, out=d[1:])
    return d, lcm


def _max_variation_int64(d: np.ndarray, q: int) -> int:
    g = np.abs(d)
    for _ in range(q):
        a = np.maximum.accumulate(g + d)
        b = np.maximum.accumulate(g - d)
        g = np.maximum(a - d, b + d)
    return int(g[-1])


def _max_variation_bigint(d: list[int], q: int) -> int:
    g = [abs(v) for v in d]
    for _ in range(q):
        a = b = None
        nxt = []
        for gi, di in zip(g, d):
            a = gi + di if a is None or gi + di > a else a
            b = gi - di if b is None or gi - di > b else b
            nxt.append(max(a - di, b + di))
        g = nxt
    return g[-1]


def max_variation(gamma: RankSequence, q: int) -> tuple[int, int]:
    """Largest total variation ``V`` of the scaled walk over cut vectors.

    Returns ``(V, L)`` with ``rho_q = 1 - V / (2 L)``.
    """
    _check_q(q)
    m, n = gamma.m, gamma.n
    lcm = math.lcm(m, n)
    # |d| <= L and g <= 2 (q + 1) L, so a + d stays below 2 (q + 2) L
    if 2 * (q + 2) * lcm < _INT64_SAFE:
        d, lcm = _scaled_walk(gamma)
        return _max_variation_int64(d, q), lcm
    up, down = lcm // m, lcm // n
    d = [0]
    for bit in gamma.bits.tolist():
        d.append(d[-1] - down if bit else d[-1] + up)
    return _max_variation_bigint(d, q), lcm


def rho_dp(gamma: RankSequence, q: int) -> Fraction:
    """OVL-q statistic by the prefix-maximum dynamic program."""
    v, lcm = max_variation(gamma, q)
    return 1 - Fraction(v, 2 * lcm)


def max_variation_batch(bits: np.ndarray, m: int, n: int, q: int) -> np.ndarray:
    """Vectorised :func:`max_variation` over the rows of a 0/1 matrix.

    Every row must contain ``m`` zeros and ``n`` ones. Returns the integer
    ``V`` per row; the common scale is ``2 * lcm(m, n)``.
    """
    _check_q(q)
    lcm = math.lcm(m, n)
    if 2 * (q + 2) * lcm >= _INT64_SAFE:
        raise InputError("batch evaluation needs 2 (q + 2) lcm(m, n) < 2**62")
    bits = np.asarray(bits)
    steps = np.where(bits == 1, -(lcm // n), lcm // m).astype(np.int64)
    d = np.zeros((bits.shape[0], bits.shape[1] + 1), dtype=np.int64)
    np.cumsum(steps, axis=1, out=d[:, 1:])
    g = np.abs(d)
    for _ in range(q):
        a = np.maximum.accumulate(g + d, axis=1)
        b = np.maximum.accumulate(g - d, axis=1)
        g = np.maximum(a - d, b + d)
    return g[:, -1]


def rho2_range(gamma: RankSequence) -> Fraction:
    """``1 - (max delta - min delta) / n`` for equal sample sizes."""
    delta = delta_walk(gamma)
    return 1 - Fraction(max(delta) - min(delta), gamma.n)


def smirnov_d(gamma: RankSequence) -> Fraction:
    """Two-sample Smirnov statistic ``max |F0 - F1|`` over the pooled ranks."""
    m, n = gamma.m, gamma.n
    ones = np.cumsum(gamma.bits, dtype=np.int64)
    zeros = np.arange(1, len(gamma) + 1, dtype=np.int64) - ones
    if m * n < _INT64_SAFE // max(m, n):
        num = int(np.max(np.abs(zeros * n - ones * m)))
    else:
        num = max(abs(z * n - o * m) for z, o in zip(zeros.tolist(), ones.tolist()))
    return Fraction(num, m * n)
