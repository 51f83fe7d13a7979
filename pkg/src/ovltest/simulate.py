"""Samplers, the density overlap oracle and the power-estimation loop.

The control density is ``normal(0, 1)``; the alternatives are a normal with
other parameters and three fixed densities with mean 0 and variance 1
(trapezoidal, triangular, and an equal mixture of ``normal(-0.8, 0.6)`` and
``normal(0.8, 0.6)``). Every draw is inverse-CDF from a single open-interval
uniform, so one seeded stream fixes a sample completely.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Literal, Protocol, Sequence

import numpy as np
from scipy import integrate, special

from . import _rng
from .errors import CostCapError, InputError
from .samples import ObservationSet, RankSequence
from .statistic import rho_dp
from .testkit import TestConfig, rejection_threshold, run_test

SQRT2 = math.sqrt(2.0)
SQRT6 = math.sqrt(6.0)
_TRAP_TAIL = (3.0 - 2.0 * SQRT2) / 2.0  # mass of [-2, -sqrt 2]
_TRAP_TOP = (2.0 - SQRT2) / 2.0
MIX_MU, MIX_SIGMA = 0.8, 0.6

Kind = Literal["normal", "trapezoidal", "triangular", "mixed"]


@dataclass(frozen=True)
class DistributionSpec:
    kind: Kind = "normal"
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if self.kind not in ("normal", "trapezoidal", "triangular", "mixed"):
            raise InputError(f"unknown distribution kind {self.kind!r}")
        if not (self.sigma > 0 and math.isfinite(self.sigma) and math.isfinite(self.mu)):
            raise InputError("normal needs finite mu and sigma > 0")

    @classmethod
    def parse(cls, text: str) -> "DistributionSpec":
        """``normal:MU,SIGMA``, ``trapezoidal``, ``triangular`` or ``mixed``."""
        text = text.strip()
        if text.startswith("normal"):
            rest = text[len("normal"):].lstrip(":")
            if not rest:
                return cls("normal")
            try:
                mu, sigma = (float(v) for v in rest.split(","))
            except ValueError:
                raise InputError(f"bad normal spec {text!r}; use normal:MU,SIGMA") from None
            return cls("normal", mu, sigma)
        if text in ("trapezoidal", "triangular", "mixed"):
            return cls(text)
        raise InputError(f"unknown distribution {text!r}")

    def label(self) -> str:
        if self.kind == "normal":
            return f"normal:{self.mu:g},{self.sigma:g}"
        return self.kind

    def support(self) -> tuple[float, float]:
        if self.kind == "trapezoidal":
            return -2.0, 2.0
        if self.kind == "triangular":
            return -SQRT6, SQRT6
        if self.kind == "mixed":
            return -MIX_MU - 40 * MIX_SIGMA, MIX_MU + 40 * MIX_SIGMA
        return self.mu - 40 * self.sigma, self.mu + 40 * self.sigma

    def kinks(self) -> list[float]:
        if self.kind == "trapezoidal":
            return [-2.0, -SQRT2, SQRT2, 2.0]
        if self.kind == "triangular":
            return [-SQRT6, 0.0, SQRT6]
        if self.kind == "mixed":
            return [-MIX_MU, MIX_MU]
        return [self.mu]


def _normal_pdf(x, mu, sigma):
    z = (x - mu) / sigma
    return np.exp(-0.5 * z * z) / (math.sqrt(2 * math.pi) * sigma)


def pdf(spec: DistributionSpec, x):
    x = np.asarray(x, dtype=np.float64)
    if spec.kind == "normal":
        out = _normal_pdf(x, spec.mu, spec.sigma)
    elif spec.kind == "mixed":
        out = 0.5 * (_normal_pdf(x, -MIX_MU, MIX_SIGMA) + _normal_pdf(x, MIX_MU, MIX_SIGMA))
    elif spec.kind == "trapezoidal":
        out = np.select(
            [(x >= -2) & (x <= -SQRT2), (x > -SQRT2) & (x <= SQRT2), (x > SQRT2) & (x <= 2)],
            [(x + 2) / 2, np.full_like(x, _TRAP_TOP), (2 - x) / 2],
            0.0,
        )
    else:
        out = np.select(
            [(x >= -SQRT6) & (x <= 0), (x > 0) & (x <= SQRT6)],
            [(x + SQRT6) / 6, (SQRT6 - x) / 6],
            0.0,
        )
    return out if out.ndim else float(out)


def cdf(spec: DistributionSpec, x):
    x = np.asarray(x, dtype=np.float64)
    if spec.kind == "normal":
        out = special.ndtr((x - spec.mu) / spec.sigma)
    elif spec.kind == "mixed":
        out = 0.5 * (special.ndtr((x + MIX_MU) / MIX_SIGMA) + special.ndtr((x - MIX_MU) / MIX_SIGMA))
    elif spec.kind == "trapezoidal":
        c = np.clip(x, -2.0, 2.0)
        out = np.select(
            [c <= -SQRT2, c <= SQRT2],
            [(c + 2) ** 2 / 4, _TRAP_TAIL + _TRAP_TOP * (c + SQRT2)],
            1.0 - (2 - c) ** 2 / 4,
        )
    else:
        c = np.clip(x, -SQRT6, SQRT6)
        out = np.where(c <= 0, (c + SQRT6) ** 2 / 12, 1.0 - (SQRT6 - c) ** 2 / 12)
    return out if out.ndim else float(out)


def quantile(spec: DistributionSpec, u: np.ndarray) -> np.ndarray:
    """Inverse CDF on (0, 1)."""
    u = np.asarray(u, dtype=np.float64)
    if spec.kind == "normal":
        return spec.mu + spec.sigma * special.ndtri(u)
    if spec.kind == "mixed":
        # the lower half of u selects the left component and is rescaled
        left = u < 0.5
        v = np.where(left, 2 * u, 2 * u - 1)
        return np.where(left, -MIX_MU, MIX_MU) + MIX_SIGMA * special.ndtri(v)
    if spec.kind == "trapezoidal":
        mid = -SQRT2 + (u - _TRAP_TAIL) / _TRAP_TOP
        return np.select(
            [u < _TRAP_TAIL, u > 1 - _TRAP_TAIL],
            [-2 + 2 * np.sqrt(u), 2 - 2 * np.sqrt(1 - u)],
            mid,
        )
    return np.where(u <= 0.5, -SQRT6 + np.sqrt(12 * u), SQRT6 - np.sqrt(12 * (1 - u)))


def sample(
    spec: DistributionSpec,
    count: int,
    stream: np.random.Generator,
    label: str = "first",
) -> ObservationSet:
    if count < 1:
        raise InputError("count must be positive")
    return ObservationSet(quantile(spec, _rng.open_uniform(stream, count)), label)


@dataclass(frozen=True)
class AnalyticOverlap:
    rho: float
    crossover_count: int | None
    closed_form: float | None = None


def _sign_changes(f0: DistributionSpec, f1: DistributionSpec, lo: float, hi: float) -> int | None:
    xs = np.linspace(lo, hi, 200_001)
    diff = pdf(f0, xs) - pdf(f1, xs)
    scale = max(np.max(np.abs(diff)), 1e-300)
    s = np.sign(np.where(np.abs(diff) <= 1e-12 * scale, 0.0, diff))
    s = s[s != 0]
    if s.size == 0:
        return None  # the densities coincide on the grid
    return int(np.count_nonzero(s[1:] != s[:-1]))


def analytic_ovl(f0: DistributionSpec, f1: DistributionSpec, tol: float = 1e-9) -> AnalyticOverlap:
    """Overlap ``integral of min(f0, f1)`` by adaptive quadrature.

    The crossover count is read off sign changes of ``f0 - f1`` on a dense
    grid and is ``None`` when the densities coincide.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    lo = min(f0.support()[0], f1.support()[0])
    hi = max(f0.support()[1], f1.support()[1])
    n_cross = _sign_changes(f0, f1, lo, hi)
    xs = np.linspace(lo, hi, 200_001)
    diff = pdf(f0, xs) - pdf(f1, xs)
    flips = np.flatnonzero(np.sign(diff[1:]) * np.sign(diff[:-1]) < 0)
    breaks = sorted({*f0.kinks(), *f1.kinks(), *xs[flips].tolist()})
    edges = [lo, *(b for b in breaks if lo < b < hi), hi]

    def integrand(x):
        return min(pdf(f0, x), pdf(f1, x))

    rho = 0.0
    for a, b in zip(edges, edges[1:]):
        val, _ = integrate.quad(integrand, a, b, epsabs=tol / len(edges), epsrel=0, limit=200)
        rho += val
    rho = min(max(rho, 0.0), 1.0)
    closed = None
    if f0.kind == f1.kind == "normal" and f0.sigma == f1.sigma:
        closed = float(2 * special.ndtr(-abs(f0.mu - f1.mu) / (2 * f0.sigma)))
        if abs(closed - rho) > max(10 * tol, 1e-8):
            raise ArithmeticError(f"quadrature {rho} disagrees with closed form {closed}")
    return AnalyticOverlap(rho, n_cross, closed)


class TwoSampleTest(Protocol):
    """Plug-in interface for tests compared in power simulations."""

    test_id: str

    def rejects(self, x: np.ndarray, y: np.ndarray, alpha: float) -> bool: ...


class OvlTest:
    """OVL-q test; rejection uses a cached exact threshold per ``(m, n, alpha)``."""

    def __init__(self, q: int, cost_cap: int | None = None):
        self.q = q
        self.test_id = f"ovl{q}"
        self._cfg_extra = {} if cost_cap is None else {"cost_cap": cost_cap}
        self._thresholds: dict = {}

    def rejects(self, x: np.ndarray, y: np.ndarray, alpha: float) -> bool:
        cfg = TestConfig(q=self.q, alpha=alpha, **self._cfg_extra)
        m, n = len(x), len(y)
        key = (m, n, alpha)
        if key not in self._thresholds:
            try:
                self._thresholds[key] = ("t", rejection_threshold(m, n, cfg))
            except CostCapError:
                self._thresholds[key] = ("mc", None)
        kind, t = self._thresholds[key]
        if kind == "mc":
            return run_test(x, y, cfg).reject_at_alpha
        if t is None:
            return False
        order = np.argsort(np.concatenate([x, y]), kind="stable")
        return rho_dp(RankSequence((order >= m).astype(np.int8)), self.q) <= t


TESTS: dict[str, TwoSampleTest] = {"ovl1": OvlTest(1), "ovl2": OvlTest(2)}


def register_test(test: TwoSampleTest) -> None:
    TESTS[test.test_id] = test


@dataclass(frozen=True)
class PowerCurvePoint:
    n: int
    test_id: str
    power: float
    trials: int
    std_error: float


def _trial_samples(f0, f1, n, master_seed, trial):
    rng = _rng.stream(master_seed, trial)
    x = quantile(f0, _rng.open_uniform(rng, n))
    y = quantile(f1, _rng.open_uniform(rng, n))
    return x, y


def _count_rejections(args) -> dict[str, int]:
    f0, f1, n, trials, alpha, test_ids, master_seed = args
    counts = dict.fromkeys(test_ids, 0)
    for t in trials:
        x, y = _trial_samples(f0, f1, n, master_seed, t)
        if np.unique(np.concatenate([x, y])).size != 2 * n:
            raise ArithmeticError(f"tied draw in trial {t}")  # probability ~ n^2 2^-53
        for tid in test_ids:
            counts[tid] += bool(TESTS[tid].rejects(x, y, alpha))
    return counts


def power_estimate(
    f0: DistributionSpec,
    f1: DistributionSpec,
    n: int,
    trials: int,
    alpha: float = 0.05,
    tests: Iterable[str] = ("ovl1", "ovl2"),
    master_seed: int = 0,
    workers: int = 1,
) -> list[PowerCurvePoint]:
    """Rejection rate of each test over ``trials`` seeded replications.

    Trial ``t`` draws its ``2n`` observations from the stream keyed by
    ``(master_seed, t)``, so the result does not depend on ``workers``.
    """
    if trials < 1 or n < 1:
        raise InputError("n and trials must be positive")
    test_ids = sorted(set(tests))
    unknown = [t for t in test_ids if t not in TESTS]
    if unknown:
        raise InputError(f"unknown test ids: {', '.join(unknown)}")
    if workers <= 1:
        totals = _count_rejections((f0, f1, n, range(trials), alpha, test_ids, master_seed))
    else:
        chunks = [range(i, trials, workers) for i in range(workers)]
        totals = dict.fromkeys(test_ids, 0)
        with ProcessPoolExecutor(workers) as pool:
            jobs = [(f0, f1, n, c, alpha, test_ids, master_seed) for c in chunks]
            for part in pool.map(_count_rejections, jobs):
                for k, v in part.items():
                    totals[k] += v
    out = []
    for tid in test_ids:
        p = totals[tid] / trials
        out.append(PowerCurvePoint(n, tid, p, trials, math.sqrt(p * (1 - p) / trials)))
    return out


POWER_CSV_HEADER = ("test_id", "n", "trials", "power", "std_error")


def power_csv(points: Sequence[PowerCurvePoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(POWER_CSV_HEADER)
    for p in sorted(points, key=lambda p: (p.test_id, p.n)):
        w.writerow((p.test_id, p.n, p.trials, repr(p.power), repr(p.std_error)))
    return buf.getvalue()


DESK_PRESET = {"trials": 2000, "n_list": [2**k for k in range(2, 11)]}
FULL_PRESET = {"trials": 20000, "n_list": [2**k for k in range(2, 13)]}
