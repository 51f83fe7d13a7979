"""Two-sample OVL-q test: statistic, exact p-value, confidence limit, report."""

from __future__ import annotations

import decimal
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from . import cache
from .errors import CostCapError, InputError
from .fast_ovl2 import pvalue_fast
from .naive_dist import (
    DEFAULT_COST_CAP,
    ExactDistribution,
    Probability,
    as_fraction,
    ci_lower,
    enumerate_distribution,
    pvalue_montecarlo,
    pvalue_naive,
    pvalue_ovl1_band,
)
from .samples import ObservationSet, TiePolicy, as_observations, pool_and_rank
from .statistic import rho_dp

Method = Literal["naive", "band", "fast", "monte_carlo"]


@dataclass(frozen=True)
class TestConfig:
    __test__ = False  # not a pytest class

    q: int = 2
    alpha: float | Fraction = 0.05
    tie_policy: TiePolicy = field(default_factory=TiePolicy)
    cost_cap: int = DEFAULT_COST_CAP
    mc_trials: int = 10_000
    seed: int = 0
    cache_dir: str | None = None

    def __post_init__(self):
        if not isinstance(self.q, int) or isinstance(self.q, bool) or self.q < 1:
            raise InputError(f"q must be a positive integer, got {self.q!r}")
        if not 0 < as_fraction(self.alpha) < 1:
            raise InputError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if self.mc_trials < 1:
            raise InputError("mc_trials must be positive")
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must be a 64-bit unsigned integer")


def render_float(x: Fraction) -> float:
    """Round-half-even to 15 significant digits."""
    ctx = decimal.Context(prec=15, rounding=decimal.ROUND_HALF_EVEN)
    return float(ctx.divide(decimal.Decimal(x.numerator), decimal.Decimal(x.denominator)))


def _ratio(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


@dataclass(frozen=True)
class TestReport:
    __test__ = False

    statistic: Fraction
    p_value: Probability
    ci_lower: Fraction
    method: Method
    m: int
    n: int
    q: int
    alpha: Fraction
    reject_at_alpha: bool

    def to_dict(self) -> dict:
        p = {**_ratio(self.p_value.value), "float": render_float(self.p_value.value),
             "source": self.p_value.source}
        if self.p_value.source == "monte_carlo":
            p["trials"] = self.p_value.trials
            p["std_error"] = self.p_value.std_error
        return {
            "m": self.m,
            "n": self.n,
            "q": self.q,
            "statistic": {**_ratio(self.statistic), "float": render_float(self.statistic)},
            "p_value": p,
            "ci_lower": {**_ratio(self.ci_lower), "float": render_float(self.ci_lower)},
            "method": self.method,
            "alpha": {**_ratio(self.alpha), "float": render_float(self.alpha)},
            "reject": self.reject_at_alpha,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self) -> str:
        p = self.p_value
        lines = [
            f"OVL-{self.q} two-sample test (m={self.m}, n={self.n})",
            f"  statistic   {self.statistic}  (~{render_float(self.statistic)})",
            f"  p-value     {p.value}  (~{render_float(p.value)}, {p.source}"
            + (f", {p.trials} trials, se={p.std_error:.3g})" if p.source == "monte_carlo" else ")"),
            f"  ci lower    {self.ci_lower}  (~{render_float(self.ci_lower)}) at alpha={self.alpha}",
            f"  method      {self.method}",
            f"  decision    {'reject' if self.reject_at_alpha else 'do not reject'} H0"
            f" (rule: p <= alpha)",
            "  floats are 15-digit renderings of the exact rationals",
        ]
        return "\n".join(lines)


def choose_method(m: int, n: int, q: int, cost_cap: int) -> Method:
    if q == 2 and m == n:
        return "fast"
    if q == 1:
        return "band"
    if math.comb(m + n, m) <= cost_cap:
        return "naive"
    return "monte_carlo"


def _grid(step_den: int) -> list[Fraction]:
    return [Fraction(j, step_den) for j in range(step_den + 1)]


def _naive_dist(m: int, n: int, q: int, cfg: TestConfig) -> ExactDistribution:
    return cache.load_or_compute(
        cfg.cache_dir, q, m, n, lambda: enumerate_distribution(m, n, q, cfg.cost_cap)
    )


def null_pvalue(
    m: int, n: int, stat: Fraction, cfg: TestConfig
) -> tuple[Probability, Fraction, Method]:
    """p-value and lower confidence limit of an observed statistic under H0."""
    q = cfg.q
    method = choose_method(m, n, q, cfg.cost_cap)
    if method == "fast":
        k = stat * n
        if k.denominator != 1:
            raise InputError(f"statistic {stat} is not on the 1/n grid")
        p = pvalue_fast(n, int(k))
        lo = ci_lower(lambda x: pvalue_fast(n, int(x * n)), cfg.alpha, _grid(n))
    elif method == "band":
        p = pvalue_ovl1_band(m, n, stat)
        lo = ci_lower(lambda x: pvalue_ovl1_band(m, n, x), cfg.alpha, _grid(math.lcm(m, n)))
    elif method == "naive":
        try:
            dist = _naive_dist(m, n, q, cfg)
        except CostCapError:
            method = "monte_carlo"
        else:
            return pvalue_naive(dist, stat), ci_lower(dist, cfg.alpha), method
    if method == "monte_carlo":

        def pf(x):
            return pvalue_montecarlo(m, n, q, x, cfg.mc_trials, cfg.seed)

        p = pf(stat)
        lo = ci_lower(pf, cfg.alpha, _grid(2 * math.lcm(m, n)))
    return p, lo, method


def run_test(x, y, cfg: TestConfig = TestConfig()) -> TestReport:
    """Run the OVL-q test of ``H0: F0 = F1`` on two samples."""
    xs = as_observations(x, "first")
    ys = as_observations(y, "second")
    gamma = pool_and_rank(xs, ys, cfg.tie_policy)
    stat = rho_dp(gamma, cfg.q)
    p, lo, method = null_pvalue(gamma.m, gamma.n, stat, cfg)
    alpha = as_fraction(cfg.alpha)
    return TestReport(stat, p, lo, method, gamma.m, gamma.n, cfg.q, alpha, p.value <= alpha)


def rejection_threshold(m: int, n: int, cfg: TestConfig) -> Fraction | None:
    """Largest attainable statistic value whose exact p-value is ``<= alpha``.

    The test rejects exactly when the statistic is at most this value.
    Returns ``None`` if not even the smallest value rejects. Raises
    :class:`CostCapError` when no exact method applies.
    """
    alpha = as_fraction(cfg.alpha)
    method = choose_method(m, n, cfg.q, cfg.cost_cap)
    if method == "fast":
        grid, pf = _grid(n), lambda x: pvalue_fast(n, int(x * n)).value
    elif method == "band":
        grid, pf = _grid(math.lcm(m, n)), lambda x: pvalue_ovl1_band(m, n, x).value
    elif method == "naive":
        dist = _naive_dist(m, n, cfg.q, cfg)
        grid, pf = list(dist.support), lambda x: Fraction(dist.count_le(x), dist.total)
    else:
        raise CostCapError(math.comb(m + n, m), cfg.cost_cap)
    # p is nondecreasing along the grid: find the last index with p <= alpha
    lo, hi = -1, len(grid) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if pf(grid[mid]) <= alpha:
            lo = mid
        else:
            hi = mid - 1
    return grid[lo] if lo >= 0 else None
