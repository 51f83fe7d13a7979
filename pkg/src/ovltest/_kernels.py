"""Compiled enumeration kernel for the naive null distribution."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def variation_histogram(m, n, q, hist):
    """Depth-first walk over every word with ``m`` zeros and ``n`` ones.

    Bits are tried 0 before 1, so leaves are visited in lexicographic order.
    The prefix-maximum state of the statistic's dynamic program is carried
    down the tree; at each leaf ``hist[V] += 1`` for the word's largest
    total variation ``V`` (walk scaled by ``lcm(m, n)``).
    """
    size = m + n
    lcm = m * n // np.gcd(m, n)
    up = lcm // m
    down = lcm // n
    best_plus = np.zeros((size + 1, q), dtype=np.int64)
    best_minus = np.zeros((size + 1, q), dtype=np.int64)
    walk = np.zeros(size + 1, dtype=np.int64)
    zeros = np.zeros(size + 1, dtype=np.int64)
    choice = np.full(size + 1, -1, dtype=np.int64)
    depth = 0
    while depth >= 0:
        if depth == size:
            v = max(best_plus[size, q - 1], best_minus[size, q - 1])
            hist[v] += 1
            depth -= 1
            continue
        c = choice[depth] + 1
        z = zeros[depth]
        if c == 0 and z == m:
            c = 1
        if c == 1 and depth - z == n:
            c = 2
        if c >= 2:
            choice[depth] = -1
            depth -= 1
            continue
        choice[depth] = c
        if c == 0:
            d = walk[depth] + up
            zeros[depth + 1] = z + 1
        else:
            d = walk[depth] - down
            zeros[depth + 1] = z
        walk[depth + 1] = d
        g = abs(d)
        for t in range(q):
            a = max(best_plus[depth, t], g + d)
            b = max(best_minus[depth, t], g - d)
            best_plus[depth + 1, t] = a
            best_minus[depth + 1, t] = b
            g = max(a - d, b + d)
        depth += 1
        choice[depth] = -1
    return hist
