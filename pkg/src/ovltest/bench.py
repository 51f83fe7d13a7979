"""Wall-clock comparison of the naive and fast OVL-2 p-value routes."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .errors import CostCapError
from .fast_ovl2 import pvalue_fast
from .naive_dist import Probability, as_fraction, enumerate_distribution, pvalue_naive

BENCH_COST_CAP = 2**31


def warm_up() -> None:
    """Trigger JIT compilation so it is not counted in timings."""
    enumerate_distribution(2, 2, 2)


def naive_pvalue(n: int, x, cost_cap: int = BENCH_COST_CAP) -> Probability:
    return pvalue_naive(enumerate_distribution(n, n, 2, cost_cap), x)


def fast_pvalue(n: int, x) -> Probability:
    x = as_fraction(x)
    k = min(n, max(-1, (x * n).__floor__()))
    if k < 0:
        return Probability(Fraction(0))
    return pvalue_fast(n, k)


@dataclass(frozen=True)
class Timing:
    method: str
    n: int
    mean_ms: float | None
    reps: int
    p_value: Fraction | None
    note: str = ""


def time_method(method: str, n: int, x, reps: int, cost_cap: int = BENCH_COST_CAP) -> Timing:
    fn = {"naive": lambda: naive_pvalue(n, x, cost_cap), "fast": lambda: fast_pvalue(n, x)}[method]
    p = None
    try:
        start = time.perf_counter()
        for _ in range(reps):
            p = fn()
        elapsed = time.perf_counter() - start
    except CostCapError as exc:
        return Timing(method, n, None, 0, None, str(exc))
    return Timing(method, n, 1000 * elapsed / reps, reps, p.value)


def format_table(rows: dict[int, dict[str, Timing]], methods: list[str]) -> str:
    head = f"{'n':>6} " + " ".join(f"{m + ' OVL-2 [ms]':>18}" for m in methods)
    lines = [head, "-" * len(head)]
    for n in sorted(rows):
        cells = []
        for m in methods:
            t = rows[n].get(m)
            cells.append(f"{'--':>18}" if t is None or t.mean_ms is None else f"{t.mean_ms:>18.4g}")
        lines.append(f"{n:>6} " + " ".join(cells))
    return "\n".join(lines)
