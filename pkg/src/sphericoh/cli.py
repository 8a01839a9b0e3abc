"""``sphericoh`` command-line interface.

Exit codes: 0 success, 1 numerical failure (or a failing verify suite),
2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .coherence import coherence_report, theorem_lower_bound, welch_bound
from .grids import TWO_PI, Grid, canonical_kind, mode_count
from .optimize import METHODS, OptimizerConfig, run
from .verify import SUITES, report_csv, run_suite

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _kv_output(d: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(d, indent=2) + "\n"
    return ",".join(d) + "\n" + ",".join(_fmt(v) for v in d.values()) + "\n"


def _require_samples(m):
    if m < 2:
        raise UsageError(f"--samples must be >= 2, got {m}")


def _read_angles(path, m, name):
    values = np.loadtxt(path, dtype=float, ndmin=1, delimiter=",")
    if values.ndim != 1 or values.shape[0] != m:
        raise UsageError(f"{name} file must hold exactly {m} values, found shape {values.shape}")
    return values


def cmd_grid(args):
    _require_samples(args.samples)
    _emit(Grid.equispaced(args.samples).to_csv(), args.out)
    return EXIT_OK


def cmd_coherence(args):
    _require_samples(args.samples)
    kind = canonical_kind(args.kind)
    m = args.samples
    rng = np.random.default_rng(args.seed)
    phi = _read_angles(args.phi_file, m, "--phi-file") if args.phi_file else rng.uniform(0.0, TWO_PI, m)
    if kind == "spherical":
        chi = np.zeros(m)
    elif args.chi_file:
        chi = _read_angles(args.chi_file, m, "--chi-file")
    else:
        chi = rng.uniform(0.0, TWO_PI, m)
    grid = Grid.equispaced(m, phi=phi, chi=chi, kind=kind)
    report = coherence_report(grid, args.bandwidth, threads=args.threads)
    text = report.to_json() + "\n" if args.format == "json" else report.to_csv()
    _emit(text, args.out)
    return EXIT_OK


def cmd_bound(args):
    _require_samples(args.samples)
    if args.bandwidth < 3:
        raise UsageError(f"bound needs --bandwidth >= 3, got {args.bandwidth}")
    B, m = args.bandwidth, args.samples
    value = theorem_lower_bound(B, m, normalized=args.normalized)
    if args.format == "text":
        sys.stdout.write(f"{value!r}\n")
        return EXIT_OK
    N = mode_count(B, args.kind)
    d = {"B": B, "m": m, "N": N, "kind": canonical_kind(args.kind),
         "normalized": args.normalized, "bound": value, "welch": welch_bound(m, N)}
    sys.stdout.write(_kv_output(d, args.format))
    return EXIT_OK


def cmd_verify(args):
    rows = run_suite(args.suite, args.max_degree)
    _emit(report_csv(rows), args.out)
    failed = sum(not r.passed for r in rows)
    if failed:
        print(f"{failed} of {len(rows)} checks failed", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_optimize(args):
    _require_samples(args.samples)
    try:
        config = OptimizerConfig(p=args.p, eta=args.eta, epsilon=args.eps, i_max=args.max_iter,
                                 method=args.method, seed=args.seed,
                                 optimize_theta=args.optimize_theta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = run(config, args.bandwidth, args.samples, args.kind)
    Path(f"{args.out}_trace.csv").write_text(result.trace_csv())
    Path(f"{args.out}_grid.csv").write_text(result.best_grid.to_csv())
    summary = {"B": result.B, "m": result.m, "kind": result.kind, "method": config.method,
               "seed": config.seed, "iterations": len(result.trace),
               "final_mu": result.final_mu, "lower_bound": result.lower_bound,
               "converged": result.converged}
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sphericoh",
                                     description="Coherence of Wigner-D / spherical-harmonic sensing matrices.")
    parser.add_argument("--threads", type=_positive_int, default=None,
                        help="worker cap (default: $SPHERICOH_THREADS or CPU count)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("grid", help="equispaced elevation grid as CSV")
    p.add_argument("--samples", "-m", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("coherence", help="mutual coherence report")
    p.add_argument("--bandwidth", "-B", type=_positive_int, required=True)
    p.add_argument("--samples", "-m", type=int, required=True)
    p.add_argument("--kind", choices=("wigner", "sh", "spherical"), default="wigner")
    p.add_argument("--phi-file")
    p.add_argument("--chi-file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_coherence)

    p = sub.add_parser("bound", help="equal-order coherence bound and Welch bound")
    p.add_argument("--bandwidth", "-B", type=int, required=True)
    p.add_argument("--samples", "-m", type=int, required=True)
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--kind", choices=("wigner", "sh", "spherical"), default="wigner")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="run identity checks; exit 0 iff all pass")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--max-degree", "-L", type=_positive_int, default=20)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("optimize", help="gradient-descent sampling design")
    p.add_argument("--bandwidth", "-B", type=_positive_int, required=True)
    p.add_argument("--samples", "-m", type=int, required=True)
    p.add_argument("--kind", choices=("wigner", "sh", "spherical"), default="wigner")
    p.add_argument("--method", choices=METHODS, default="adam")
    p.add_argument("--p", type=int, default=8)
    p.add_argument("--eta", type=float, default=0.5)
    p.add_argument("--eps", type=float, default=1e-4)
    p.add_argument("--max-iter", type=_positive_int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--optimize-theta", action="store_true")
    p.add_argument("--out", required=True, help="prefix for <out>_trace.csv and <out>_grid.csv")
    p.set_defaults(func=cmd_optimize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"sphericoh: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"sphericoh: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
