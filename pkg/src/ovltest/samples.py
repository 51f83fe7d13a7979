"""Sample ingestion, tie handling and rank sequences.

All exact computations in the package take a :class:`RankSequence` as their
only input: the binary word recording, for the sorted pooled sample, whether
each observation came from the first (0) or second (1) sample.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Literal, Sequence

import numpy as np

from . import _rng
from .errors import InputError, TieError, UnequalSizesError

JITTER_RETRIES = 8


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ObservationSet:
    values: np.ndarray
    label: Literal["first", "second"] = "first"

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64).ravel()
        if arr.size == 0:
            raise InputError(f"{self.label} sample is empty")
        if not np.all(np.isfinite(arr)):
            bad = arr[~np.isfinite(arr)][0]
            raise InputError(f"{self.label} sample contains non-finite value {bad!r}")
        object.__setattr__(self, "values", _frozen(arr))

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class TiePolicy:
    """``reject`` raises on duplicates; ``jitter`` perturbs every value by a
    seeded ``u * scale`` with ``u`` uniform on (-1, 1)."""

    mode: Literal["reject", "jitter"] = "reject"
    seed: int = 0
    scale: float = 1e-9

    def __post_init__(self):
        if self.mode not in ("reject", "jitter"):
            raise InputError(f"unknown tie mode {self.mode!r}")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise InputError("jitter scale must be a positive finite number")
        if not 0 <= self.seed < 2**64:
            raise InputError("jitter seed must be a 64-bit unsigned integer")

    @classmethod
    def parse(cls, text: str) -> "TiePolicy":
        """Parse ``reject``, ``jitter:SEED`` or ``jitter:SEED:SCALE``."""
        parts = text.strip().split(":")
        try:
            if parts == ["reject"]:
                return cls()
            if parts[0] == "jitter" and len(parts) in (2, 3):
                scale = float(parts[2]) if len(parts) == 3 else 1e-9
                return cls("jitter", int(parts[1]), scale)
        except ValueError as exc:
            raise InputError(f"bad tie policy {text!r}: {exc}") from None
        raise InputError(f"bad tie policy {text!r}; use reject or jitter:SEED[:SCALE]")


@dataclass(frozen=True, eq=False)
class RankSequence:
    bits: np.ndarray
    m: int = field(init=False)
    n: int = field(init=False)

    def __post_init__(self):
        b = np.array(self.bits, dtype=np.int8).ravel()
        if b.size and not np.all((b == 0) | (b == 1)):
            raise InputError("rank sequence entries must be 0 or 1")
        n = int(b.sum())
        m = int(b.size) - n
        if m < 1 or n < 1:
            raise InputError(f"rank sequence needs at least one 0 and one 1 (m={m}, n={n})")
        object.__setattr__(self, "bits", _frozen(b))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)

    def __len__(self) -> int:
        return self.m + self.n

    def __eq__(self, other):
        if not isinstance(other, RankSequence):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.bits.tobytes())

    def __repr__(self):
        return f"RankSequence({''.join(map(str, self.bits.tolist()))})"


EcdfDiffWalk = tuple  # tuple[Fraction, ...]


def _find_tie(sorted_values: np.ndarray) -> float | None:
    dup = np.flatnonzero(np.diff(sorted_values) == 0)
    return float(sorted_values[dup[0]]) if dup.size else None


def pool_and_rank(
    x: ObservationSet, y: ObservationSet, policy: TiePolicy = TiePolicy()
) -> RankSequence:
    """Pool two samples and record the source of each order statistic."""
    xv, yv = x.values, y.values
    if policy.mode == "jitter":
        rng = _rng.stream(policy.seed)
        for _ in range(JITTER_RETRIES):
            pooled = np.concatenate([xv, yv])
            pooled = pooled + (2.0 * _rng.open_uniform(rng, pooled.size) - 1.0) * policy.scale
            order = np.argsort(pooled, kind="stable")
            if _find_tie(pooled[order]) is None:
                break
        else:
            raise TieError(
                float(_find_tie(pooled[order])),
                f"jitter failed to separate ties after {JITTER_RETRIES} draws",
            )
    else:
        pooled = np.concatenate([xv, yv])
        order = np.argsort(pooled, kind="stable")
        tie = _find_tie(pooled[order])
        if tie is not None:
            raise TieError(tie)
    return RankSequence((order >= xv.size).astype(np.int8))


def ecdf_diff(gamma: RankSequence) -> tuple[Fraction, ...]:
    """Exact walk d[i] = F0(i) - F1(i) over the pooled ranks, i = 0..m+n."""
    up, down = Fraction(1, gamma.m), Fraction(1, gamma.n)
    d = [Fraction(0)]
    for b in gamma.bits.tolist():
        d.append(d[-1] - down if b else d[-1] + up)
    return tuple(d)


def delta_walk(gamma: RankSequence) -> tuple[int, ...]:
    """Integer walk of prefix (#zeros - #ones); requires m == n."""
    if gamma.m != gamma.n:
        raise UnequalSizesError(gamma.m, gamma.n)
    steps = 1 - 2 * gamma.bits.astype(np.int64)
    return (0, *np.cumsum(steps).tolist())


def parse_sample_text(text: str, label: str = "first") -> ObservationSet:
    """Parse one number per line; ``#`` comments, blank lines and a single
    header row of a one-column CSV are skipped."""
    values: list[float] = []
    header_allowed = True
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        fields = [f.strip() for f in row]
        if not fields or not any(fields) or fields[0].startswith("#"):
            continue
        fields = [f for f in fields if f]
        was_first, header_allowed = header_allowed, False
        if len(fields) != 1:
            raise InputError(f"line {lineno}: expected a single column, got {len(fields)}")
        try:
            values.append(float(fields[0]))
        except ValueError:
            if was_first:
                continue  # CSV header
            raise InputError(f"line {lineno}: not a number: {fields[0]!r}") from None
    return ObservationSet(np.array(values), label)


def read_sample_file(path: str | Path, label: str = "first") -> ObservationSet:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return parse_sample_text(text, label)


def as_observations(values: Iterable[float] | ObservationSet, label: str) -> ObservationSet:
    if isinstance(values, ObservationSet):
        return values
    return ObservationSet(np.asarray(list(values), dtype=np.float64), label)
