"""Seeded random streams shared by the sampling code.

Every stream is a Philox (counter-based) generator keyed through
``numpy.random.SeedSequence``, so a stream is a pure function of its key
words and independent of the order in which streams are created.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_SCALE53 = 2.0**-53


def stream(*key: int) -> np.random.Generator:
    words = [int(k) & _MASK64 for k in key]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(words)))


def open_uniform(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform draws on the open interval (0, 1)."""
    k = rng.integers(0, 1 << 53, size=size, dtype=np.int64)
    return (k.astype(np.float64) + 0.5) * _SCALE53
