"""Command-line front end.

    shelfwaves run <config> [--out DIR] [--verbose]
    shelfwaves sweep <config> --param <path> --values v1,v2,... \
        [--jobs N] [--out DIR] [--verbose]

Exit codes: 0 success, 1 I/O failure, 2 configuration or hypothesis
validation failure, 3 solver non-convergence.  The SHELFWAVES_OUT
environment variable overrides the output directory (the --out flag wins
over both it and the config file).
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .config import ConfigError, parse_config
from .errors import (BoundaryHitError, DegenerateDriftError,
                     HypothesisViolationError, ProfileError,
                     SelfIntersectionError, ShelfwavesError, SolverError)
from .pipeline import run_scenario, sweep_row, write_report, write_sweep_csv
from .profiles import make_depth_profile, validate_theorem_hypotheses

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3

_VALIDATION_ERRORS = (ConfigError, ProfileError, SelfIntersectionError,
                      HypothesisViolationError, ValueError)
_SOLVER_ERRORS = (SolverError, DegenerateDriftError, BoundaryHitError)


def _resolve_out(args, cfg) -> str:
    if args.out is not None:
        return args.out
    return os.environ.get("SHELFWAVES_OUT", cfg.out_dir)


def _validate(cfg) -> list:
    """Per-field diagnostics for hypothesis violations; empty means valid."""
    problems = []
    try:
        d = make_depth_profile(cfg.depth_family, cfg.depth_params, cfg.delta)
    except ProfileError as exc:
        return [f"depth: {exc}"]
    hyp = validate_theorem_hypotheses(d)
    if not hyp["monotone"]:
        problems.append(
            "depth.params: the monotonicity hypothesis beta' > 0 fails "
            f"(min beta' = {hyp['min_beta_prime']:.6g}); the band edge and "
            "trapping constants are undefined for non-monotone depth")
    if not hyp["concave"]:
        problems.append(
            "depth.params: the concavity hypothesis beta'' <= 0 fails "
            f"(max beta'' = {hyp['max_beta_double']:.6g})")
    return problems


def _cmd_run(args) -> int:
    try:
        cfg = parse_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    problems = _validate(cfg)
    if problems:
        for p in problems:
            print(f"validation: {p}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = _resolve_out(args, cfg)
    try:
        result = run_scenario(cfg, verbose=args.verbose)
    except _VALIDATION_ERRORS as exc:
        print(f"validation: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _SOLVER_ERRORS as exc:
        print(f"solver: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    try:
        write_report(result, out_dir, verbose=args.verbose)
    except OSError as exc:
        print(f"i/o: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _cmd_sweep(args) -> int:
    try:
        cfg = parse_config(args.config)
        values = [float(v) for v in args.values.split(",") if v.strip()]
        if not values:
            raise ConfigError("--values must list at least one number")
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    problems = _validate(cfg)
    if problems:
        for p in problems:
            print(f"validation: {p}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = _resolve_out(args, cfg)

    if args.jobs > 1 and len(values) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(sweep_row, [cfg] * len(values),
                                 [args.param] * len(values), values))
    else:
        rows = [sweep_row(cfg, args.param, v) for v in values]

    if args.verbose:
        for row in rows:
            print(f"value {row['value']}: {row['status']}"
                  + (f" ({row['error']})" if row["status"] == "error" else ""))
    try:
        os.makedirs(out_dir, exist_ok=True)
        write_sweep_csv(os.path.join(out_dir, "sweep.csv"), rows)
    except OSError as exc:
        print(f"i/o: {exc}", file=sys.stderr)
        return EXIT_IO
    if all(row["status"] == "error" for row in rows):
        print("error: every sweep row failed", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shelfwaves",
        description="Band edges, trapping constants and trapped modes of "
                    "shelf-wave pencils on curved strips.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario config")
    run_p.add_argument("config", help="scenario config file")
    run_p.add_argument("--out", default=None, help="output directory")
    run_p.add_argument("--verbose", action="store_true")
    run_p.set_defaults(func=_cmd_run)

    sweep_p = sub.add_parser("sweep", help="run a one-parameter sweep")
    sweep_p.add_argument("config", help="scenario config file")
    sweep_p.add_argument("--param", required=True,
                         help='parameter path, e.g. "curvature.params[0]"')
    sweep_p.add_argument("--values", required=True,
                         help="comma-separated list of values")
    sweep_p.add_argument("--jobs", type=int, default=1,
                         help="max concurrent sweep rows")
    sweep_p.add_argument("--out", default=None, help="output directory")
    sweep_p.add_argument("--verbose", action="store_true")
    sweep_p.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ShelfwavesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"i/o: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
