"""Command-line front end: ``ovltest test|table|power|bench``.

Exit status: 0 on success, 2 on usage or input errors, 3 when ties are
rejected.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import bench, cache, simulate
from .errors import InputError, OvlError, TieError
from .fast_ovl2 import full_distribution, pvalue_fast
from .naive_dist import DEFAULT_COST_CAP, as_fraction, enumerate_distribution
from .samples import TiePolicy, read_sample_file
from .testkit import TestConfig, render_float, run_test

EXIT_OK, EXIT_INPUT, EXIT_TIE = 0, 2, 3


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer: {text!r}")
    return v


def _int_list(text: str) -> list[int]:
    return [_positive_int(t) for t in text.split(",") if t.strip()]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_test(args) -> int:
    cfg = TestConfig(
        q=args.q,
        alpha=as_fraction(args.alpha),
        tie_policy=TiePolicy.parse(args.ties),
        cost_cap=args.cost_cap,
        mc_trials=args.mc_trials,
        seed=args.seed,
        cache_dir=args.cache_dir,
    )
    x = read_sample_file(args.x, "first")
    y = read_sample_file(args.y, "second")
    report = run_test(x, y, cfg)
    print(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_OK


def cmd_table(args) -> int:
    if args.q != 2:
        raise InputError("table supports only --q 2 (fast OVL-2 for m = n)")
    n = args.n
    if args.k is not None:
        if not 0 <= args.k <= n:
            raise InputError(f"--k must lie in [0, {n}]")
        p = pvalue_fast(n, args.k).value
        total = math.comb(2 * n, n)
        text = (
            "k,n,cum_count,total,p_num,p_den,p_float\n"
            f"{args.k},{n},{p * total},{total},{p.numerator},{p.denominator},{render_float(p)!r}\n"
        )
    else:
        if args.method == "fast":
            dist = cache.load_or_compute(args.cache_dir, 2, n, n, lambda: full_distribution(n))
        else:
            dist = enumerate_distribution(n, n, 2, args.cost_cap)
        text = dist.to_csv()
    _emit(text, args.out)
    return EXIT_OK


def cmd_power(args) -> int:
    f0 = simulate.DistributionSpec("normal", 0.0, 1.0)
    f1 = simulate.DistributionSpec.parse(args.f1)
    preset = simulate.FULL_PRESET if args.preset == "full" else simulate.DESK_PRESET
    n_list = args.n_list or preset["n_list"]
    trials = args.trials or preset["trials"]
    tests = [t.strip() for t in args.tests.split(",") if t.strip()]
    points = []
    for n in n_list:
        points += simulate.power_estimate(
            f0, f1, n, trials, float(args.alpha), tests, args.seed, args.workers
        )
    _emit(simulate.power_csv(points), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in ("naive", "fast"):
            raise InputError(f"unknown method {m!r}")
    x = as_fraction(args.x_arg)
    if "naive" in methods:
        bench.warm_up()
    rows = {}
    for n in args.n_list:
        rows[n] = {}
        for m in methods:
            reps = args.naive_reps if m == "naive" else args.fast_reps
            t = bench.time_method(m, n, x, reps, args.cost_cap)
            if t.mean_ms is None:
                print(f"advisory: naive OVL-2 refused at n={n}: {t.note}", file=sys.stderr)
            rows[n][m] = t
        got = {t.p_value for t in rows[n].values() if t.p_value is not None}
        if len(got) > 1:
            raise OvlError(f"naive and fast p-values disagree at n={n}: {got}")
    print(f"p_2,n,n({x}); mean wall-clock time per computation")
    print(bench.format_table(rows, methods))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ovltest", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="run the OVL-q test on two sample files")
    p.add_argument("--x", required=True, help="first sample file")
    p.add_argument("--y", required=True, help="second sample file")
    p.add_argument("--q", required=True, type=_positive_int)
    p.add_argument("--alpha", default="0.05")
    p.add_argument("--ties", default="reject", help="reject | jitter:SEED[:SCALE]")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--cost-cap", type=_positive_int, default=DEFAULT_COST_CAP)
    p.add_argument("--mc-trials", type=_positive_int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cache-dir", default=None, help=f"defaults to ${cache.ENV_VAR}")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("table", help="exact OVL-2 null distribution for m = n")
    p.add_argument("--q", required=True, type=_positive_int)
    p.add_argument("--n", required=True, type=_positive_int)
    p.add_argument("--k", type=int, default=None, help="single entry p(k/n)")
    p.add_argument("--method", choices=("fast", "naive"), default="fast")
    p.add_argument("--cost-cap", type=_positive_int, default=DEFAULT_COST_CAP)
    p.add_argument("--out", default=None)
    p.add_argument("--cache-dir", default=None, help=f"defaults to ${cache.ENV_VAR}")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("power", help="Monte Carlo power curves against normal(0,1)")
    p.add_argument("--f1", required=True, help="normal:MU,SIGMA | trapezoidal | triangular | mixed")
    p.add_argument("--n-list", type=_int_list, default=None)
    p.add_argument("--trials", type=_positive_int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tests", default="ovl1,ovl2")
    p.add_argument("--alpha", default="0.05")
    p.add_argument("--preset", choices=("desk", "full"), default="desk")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("bench", help="time naive vs fast OVL-2 p-values")
    p.add_argument("--n-list", type=_int_list, default=[10, 12, 14, 16])
    p.add_argument("--methods", default="naive,fast")
    p.add_argument("--x-arg", default="1/2", help="evaluate p_2,n,n at this x")
    p.add_argument("--naive-reps", type=_positive_int, default=1)
    p.add_argument("--fast-reps", type=_positive_int, default=100)
    p.add_argument("--cost-cap", type=_positive_int, default=bench.BENCH_COST_CAP)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # usage errors exit with status 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except TieError as exc:
        print(f"ovltest: TieError: {exc}", file=sys.stderr)
        return EXIT_TIE
    except (InputError, ValueError, ZeroDivisionError, OvlError) as exc:
        print(f"ovltest: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
