"""Command-line front end: ``search``, ``verify``, ``construct`` and ``hist``."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .linalg import MatrixError
from .lm import LmOptions
from .objective import BasisSet, is_mub_set, is_prime, prime_mub_construction
from .search import (SearchConfig, histogram, read_trials_csv, run_search,
                     write_trials_csv)
from .unitary import unitarity_defect

EXIT_OK = 0
EXIT_NOT_MUB = 1
EXIT_USAGE = 2
EXIT_IO = 3

VERIFY_UNITARY_TOL = 1e-8


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text}")
    return value


def _seed(text):
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 bits: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mubsearch",
        description="Numerical search for mutually unbiased bases.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="multi-start LM search")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--bases", type=_positive_int, required=True,
                   help="number of free bases N (the identity basis is added)")
    p.add_argument("--trials", type=_positive_int, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--success-tol", type=_positive_float, default=1e-6)
    p.add_argument("--term-tol", type=_positive_float, default=1e-8)
    p.add_argument("--max-iter", type=_positive_int, default=400)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--bin-width", type=_positive_float, default=0.005)
    p.add_argument("--out", required=True, help="output prefix")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="check a basis-set JSON file")
    p.add_argument("--input", required=True)
    p.add_argument("--success-tol", type=_positive_float, default=1e-6)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="write the prime-dimension MUB set")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("hist", help="histogram of minima from a trials CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--bin-width", type=_positive_float, default=0.005)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_hist)
    return parser


def cmd_search(args, parser) -> int:
    if args.dim < 2:
        parser.error("--dim must be at least 2")
    opts = LmOptions(func_change_tol=args.term_tol, max_iterations=args.max_iter)
    config = SearchConfig(d=args.dim, n_bases=args.bases, trials=args.trials,
                          base_seed=args.seed, success_threshold=args.success_tol,
                          lm_options=opts, parallelism=args.jobs,
                          bin_width=args.bin_width)
    report = run_search(config)
    summary = report.summary()
    summary["flags"] = {k: v for k, v in vars(args).items() if k != "func"}
    try:
        write_trials_csv(f"{args.out}.trials.csv", report)
        with open(f"{args.out}.summary.json", "w") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"d={args.dim} N={args.bases}: {report.success_count}/{args.trials} "
          f"successes, min objective {report.min_objective:.6f}")
    return EXIT_OK


def cmd_verify(args, parser) -> int:
    try:
        basis_set = BasisSet.load(args.input, unitary_tol=VERIFY_UNITARY_TOL)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, MatrixError) as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    check = is_mub_set(basis_set, args.success_tol)
    defect = max(unitarity_defect(u) for u in basis_set.bases)
    print(f"objective: {check.objective:.17g}")
    print(f"max deviation from 1/sqrt(d): {check.max_deviation:.3e}")
    print(f"max unitarity defect: {defect:.3e}")
    print("mutually unbiased" if check.is_mub else "not mutually unbiased")
    return EXIT_OK if check.is_mub else EXIT_NOT_MUB


def cmd_construct(args, parser) -> int:
    if not is_prime(args.dim):
        print(f"error: dimension {args.dim} is not prime", file=sys.stderr)
        return EXIT_USAGE
    try:
        prime_mub_construction(args.dim).save(args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_hist(args, parser) -> int:
    try:
        rows = read_trials_csv(args.input)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    bins = histogram([r["objective_final"] for r in rows], args.bin_width)
    try:
        with open(args.out, "w") as fh:
            for b in bins:
                fh.write(f"{b.center!r} {b.count}\n")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
