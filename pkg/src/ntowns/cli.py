"""Command-line interface.

Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 resource abort.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .cache import config_hash, read_records, records_from_results, write_records
from .dp import DpConfig, OptResult, ResourceLimitExceeded, default_width_limit, solve_all
from .fixtures import MAX_FIXTURE_N
from .geometry import CITY, TOWN, Town, format_thirds
from .oracle import EXHAUSTIVE, LEVEL_MAX_N, PROFILE, brute_force_optimum
from .report import fixture_rows, render_shape, render_table, rows_from_results, verify

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _objectives(name: str) -> list[str]:
    return [TOWN, CITY] if name == "both" else [name]


def _solve(args, objective: str, n_max: int, reconstruct: bool) -> dict[int, OptResult]:
    prune = not getattr(args, "no_prune", False)
    cfg = DpConfig(
        n_max,
        objective,
        upper_bound_cut=prune,
        balance_cut=prune,
        reconstruct=reconstruct,
        threads=getattr(args, "threads", 1),
        max_states=getattr(args, "max_states", None),
    )
    results = solve_all(cfg)
    cache = getattr(args, "cache", None)
    if cache:
        _store(cache, objective, results, cfg.width_limit)
    return results


def _store(path: str, objective: str, results, width_limit: int) -> None:
    keep = []
    if os.path.exists(path):
        keep = [r for r in read_records(path) if r.objective != objective]
    write_records(path, keep + records_from_results(results, width_limit))


def _load(path: str, objective: str, n_max: int) -> dict[int, OptResult] | None:
    """Cached results for 1..n_max, or None if the cache does not cover them."""
    if not path or not os.path.exists(path):
        return None
    recs = {r.n: r for r in read_records(path) if r.objective == objective}
    if not recs or any(n not in recs for n in range(1, n_max + 1)):
        return None
    # the cache holds one full run for 1..N; its hash pins that run's width limit
    expected = config_hash(objective, default_width_limit(max(recs)))
    if any(r.config_hash != expected for r in recs.values()):
        return None
    out = {}
    for n in range(1, n_max + 1):
        r = recs[n]
        if not r.shapes:
            return None
        shapes = [Town(tuple(p) for p in pts) for pts in r.shapes]
        out[n] = OptResult(n, objective, Fraction(r.cost_times_3, 3), r.multiplicity, shapes)
    return out


def cmd_solve(args) -> int:
    results = {}
    for obj in _objectives(args.objective):
        results[obj] = _solve(args, obj, args.n_max, args.reconstruct)
    rows = rows_from_results(results.get(TOWN), results.get(CITY))
    sys.stdout.write(render_table(rows, args.format))
    return EXIT_OK


def cmd_table(args) -> int:
    if args.fixtures:
        sys.stdout.write(render_table(fixture_rows(args.n_max), args.format))
        return EXIT_OK
    results = {}
    for obj in (TOWN, CITY):
        cached = _load(args.cache, obj, args.n_max)
        results[obj] = cached if cached is not None else _solve(args, obj, args.n_max, True)
    sys.stdout.write(render_table(rows_from_results(results[TOWN], results[CITY]), args.format))
    return EXIT_OK


def cmd_show(args) -> int:
    res = _solve(args, args.objective, args.n, True)[args.n]
    if args.format == "svg" and args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        for i, shape in enumerate(res.shapes, 1):
            path = os.path.join(args.out_dir, f"{args.objective}-{args.n}-{i}.svg")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(render_shape(shape, "svg", args.objective))
            print(path)
        return EXIT_OK
    print(f"n={args.n} objective={args.objective} cost={format_thirds(res.cost)} shapes={res.multiplicity}")
    for i, shape in enumerate(res.shapes, 1):
        print()
        print(render_shape(shape, args.format, args.objective).rstrip("\n"))
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify(args.n_max, threads=args.threads)
    if args.json:
        print(json.dumps(report.as_dict(), indent=1))
    else:
        for line in report.lines:
            print(line)
        print(f"{'OK' if report.ok else 'MISMATCH'}: {len(report.lines) - len(report.failures)}/{len(report.lines)} checks passed")
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_oracle(args) -> int:
    for obj in _objectives(args.objective):
        res = brute_force_optimum(args.n, obj, args.level)
        print(f"n={args.n} objective={obj} level={args.level} cost={format_thirds(res.cost)} multiplicity={res.multiplicity}")
        if args.shapes:
            for shape in res.shapes:
                print(render_shape(shape))
                print()
    return EXIT_OK


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ntowns", description="Optimal n-towns and n-block cities (Manhattan metric).")
    sub = p.add_subparsers(dest="command", required=True)

    def solver_flags(sp):
        sp.add_argument("--threads", type=_positive, default=1, help="worker threads per DP layer")
        sp.add_argument("--no-prune", action="store_true", help="disable upper-bound and balance cuts")
        sp.add_argument("--max-states", type=_positive, default=None, help="abort when live DP states exceed this")
        sp.add_argument("--cache", default=None, help="newline-delimited JSON result cache")

    sp = sub.add_parser("solve", help="compute optimal costs for n = 1..N")
    sp.add_argument("--n-max", type=_positive, required=True)
    sp.add_argument("--objective", choices=[TOWN, CITY, "both"], default="both")
    sp.add_argument("--reconstruct", action="store_true", help="also count optimal shapes")
    sp.add_argument("--format", choices=["ascii", "csv", "json"], default="ascii")
    solver_flags(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("table", help="results table with error columns")
    sp.add_argument("--n-max", type=_positive, default=40)
    sp.add_argument("--format", choices=["ascii", "csv", "json"], default="ascii")
    sp.add_argument("--fixtures", action="store_true", help="print the embedded reference table instead of solving")
    solver_flags(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("show", help="render all optimal shapes for one n")
    sp.add_argument("--n", type=_positive, required=True)
    sp.add_argument("--objective", choices=[TOWN, CITY], default=TOWN)
    sp.add_argument("--format", choices=["ascii", "svg"], default="ascii")
    sp.add_argument("--out-dir", default=None, help="write one SVG file per shape here")
    solver_flags(sp)
    sp.set_defaults(func=cmd_show)

    sp = sub.add_parser("verify", help="check results against the embedded table")
    sp.add_argument("--n-max", type=_positive, required=True)
    sp.add_argument("--threads", type=_positive, default=1)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("oracle", help="brute-force optimum for small n")
    sp.add_argument("--n", type=_positive, required=True)
    sp.add_argument("--level", choices=[EXHAUSTIVE, PROFILE], default=PROFILE)
    sp.add_argument("--objective", choices=[TOWN, CITY, "both"], default="both")
    sp.add_argument("--shapes", action="store_true")
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.n_max > MAX_FIXTURE_N:
        parser.error(f"--n-max must be at most {MAX_FIXTURE_N}")
    if args.command == "oracle" and args.n > LEVEL_MAX_N[args.level]:
        parser.error(f"--n must be at most {LEVEL_MAX_N[args.level]} for level {args.level}")
    try:
        return args.func(args)
    except ResourceLimitExceeded as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
