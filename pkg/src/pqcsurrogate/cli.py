"""Command-line interface.

Subcommands build surrogates, evaluate them, scan curves, run Monte-Carlo
error studies, and print benchmark circuits.  Exit codes: 0 success, 1 I/O
failure, 2 validation failure, 3 numeric failure.  Machine-readable run stats
go to stdout as JSON; artifacts go to files.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

import numpy as np

from . import io as pio
from .errors import NumericError, ValidationError
from .experiments import (
    CurveSpec,
    build_benchmark_circuit,
    curve_point,
    mc_relative_l2,
    scan_curve,
)
from .kernel import KernelSurrogate, build_kernel_surrogate, kernel_sample_bound
from .simulator import GridOracle, f_eval, f_eval_many
from .taylor import TaylorSurrogate, build_taylor, taylor_error_bound, taylor_sample_bound

#: Default SEM warning threshold for Monte-Carlo runs (fraction of the mean).
DEFAULT_SEM_THRESHOLD = 0.021


def _parse_theta(text: str, m: int) -> np.ndarray:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ValidationError(f"cannot parse theta {text!r}: {exc}") from exc
    if len(values) != m:
        raise ValidationError(f"theta has {len(values)} entries, expected {m}")
    return np.array(values)


def _parse_t_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"t-grid must be 'start:stop:count', got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ValidationError(f"cannot parse t-grid {text!r}: {exc}") from exc
    if count < 1:
        raise ValidationError(f"t-grid count must be >= 1, got {count}")
    return np.linspace(start, stop, count)


def _load_problem(args):
    """(circuit, observable) from --circuit/--observable or --benchmark."""
    if getattr(args, "benchmark", None) is not None:
        n, d = args.benchmark
        circuit = build_benchmark_circuit(n, d)
        if getattr(args, "observable", None):
            with open(args.observable, encoding="utf-8") as fh:
                obs = pio.parse_observable_text(fh.read())
        else:
            from .experiments import BenchmarkSpec

            obs = BenchmarkSpec(n, d).observable()
        return circuit, obs
    if not getattr(args, "circuit", None):
        raise ValidationError("provide either --circuit or --benchmark")
    with open(args.circuit, encoding="utf-8") as fh:
        circuit = pio.parse_circuit_text(fh.read())
    if not getattr(args, "observable", None):
        raise ValidationError("--observable is required with --circuit")
    with open(args.observable, encoding="utf-8") as fh:
        obs = pio.parse_observable_text(fh.read())
    return circuit, obs


def _build(args):
    """Shared by build-surrogate and cache-stats: build and report stats."""
    circuit, obs = _load_problem(args)
    oracle = GridOracle(circuit, obs)
    start = time.perf_counter()
    if args.method == "taylor":
        surrogate = build_taylor(oracle, args.order, workers=args.threads)
        bound = taylor_sample_bound(circuit.m, args.order)
    else:
        surrogate = build_kernel_surrogate(oracle, args.order, workers=args.threads)
        bound = kernel_sample_bound(circuit.m, args.order)
    elapsed = time.perf_counter() - start
    stats = oracle.cache.stats()
    stats.update({
        "method": args.method,
        "m": circuit.m,
        "order": args.order,
        "one_norm": obs.one_norm(),
        "sample_bound": bound,
        "within_bound": stats["distinct_points"] <= bound,
        "wall_time_s": round(elapsed, 6),
    })
    if isinstance(surrogate, KernelSurrogate):
        stats["nodes"] = len(surrogate.nodes)
    return surrogate, stats


def cmd_build_surrogate(args) -> int:
    surrogate, stats = _build(args)
    pio.save_surrogate(surrogate, args.output)
    stats["output"] = args.output
    print(json.dumps(stats))
    return 0


def cmd_cache_stats(args) -> int:
    _, stats = _build(args)
    print(json.dumps(stats))
    return 0


def cmd_eval(args) -> int:
    surrogate = pio.load_surrogate(args.surrogate)
    if (args.theta is None) == (args.curve is None):
        raise ValidationError("provide exactly one of --theta or --curve")
    if args.theta is not None:
        theta = _parse_theta(args.theta, surrogate.m)
        print(json.dumps({"value": surrogate(theta)}))
        return 0
    if args.t_grid is None:
        raise ValidationError("--curve requires --t-grid")
    if args.output is None:
        raise ValidationError("--curve requires --output for the CSV")
    spec = CurveSpec(args.curve, surrogate.m)
    ts = _parse_t_grid(args.t_grid)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(pio.SCAN_CSV_HEADER)
        for t in ts:
            value = surrogate(curve_point(spec, float(t)))
            writer.writerow([pio.fmt17(t), "", pio.fmt17(value), "", ""])
    print(json.dumps({"rows": len(ts), "output": args.output}))
    return 0


def cmd_scan_curve(args) -> int:
    circuit, obs = _load_problem(args)
    surrogate = pio.load_surrogate(args.surrogate)
    if surrogate.m != circuit.m:
        raise ValidationError(
            f"surrogate has m={surrogate.m}, circuit has m={circuit.m}"
        )
    spec = CurveSpec(args.curve, circuit.m)
    ts = _parse_t_grid(args.t_grid)
    bound_fn = None
    if isinstance(surrogate, TaylorSurrogate):
        bound_fn = lambda theta: taylor_error_bound(
            surrogate.obs_one_norm, surrogate.order, theta
        )
    rows = scan_curve(
        lambda theta: f_eval(circuit, obs, theta), surrogate, spec, ts, bound_fn
    )
    pio.write_scan_csv(rows, args.output)
    print(json.dumps({"rows": len(rows), "output": args.output}))
    return 0


def cmd_l2_error(args) -> int:
    circuit, obs = _load_problem(args)
    oracle = GridOracle(circuit, obs)
    if args.method == "taylor":
        surrogate = build_taylor(oracle, args.order, workers=args.threads)
    else:
        surrogate = build_kernel_surrogate(oracle, args.order, workers=args.threads)
    try:
        ks = [int(v) for v in args.k.split(",")]
    except ValueError as exc:
        raise ValidationError(f"cannot parse --k {args.k!r}") from exc

    truth = lambda thetas: f_eval_many(circuit, obs, thetas)
    rows = []
    for k in ks:
        result = mc_relative_l2(
            truth,
            surrogate.eval_many,
            circuit.m,
            k,
            args.n_f,
            args.n_diff,
            args.seed,
            workers=args.threads,
            sem_warn_fraction=args.sem_threshold,
        )
        rows.append((args.method, args.order, k, result))
    pio.write_mc_csv(rows, args.output)
    print(json.dumps({
        "rows": len(rows),
        "output": args.output,
        "ratios": {str(k): res.ratio for _, _, k, res in rows},
    }))
    return 0


def cmd_bench_circuit(args) -> int:
    circuit = build_benchmark_circuit(args.n, args.d)
    text = pio.format_circuit_text(circuit)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(json.dumps({"qubits": args.n, "layers": args.d, "output": args.output}))
    else:
        sys.stdout.write(text)
    return 0


def _add_problem_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--circuit", help="circuit text file")
    parser.add_argument(
        "--benchmark", nargs=2, type=int, metavar=("N", "D"),
        help="use the benchmark circuit with N qubits and D layers",
    )
    parser.add_argument(
        "--observable",
        help="observable text file (defaults to all-Z for --benchmark)",
    )


def _add_build_args(parser: argparse.ArgumentParser) -> None:
    _add_problem_args(parser)
    parser.add_argument("--method", choices=("taylor", "kernel"), required=True)
    parser.add_argument("--order", type=int, required=True, help="surrogate order L")
    parser.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqcsurrogate",
        description="Classical surrogates of parametrized quantum circuits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-surrogate", help="build and save a surrogate")
    _add_build_args(p)
    p.add_argument("--output", required=True, help="surrogate JSON path")
    p.set_defaults(handler=cmd_build_surrogate)

    p = sub.add_parser("cache-stats", help="build a surrogate and report cache stats")
    _add_build_args(p)
    p.set_defaults(handler=cmd_cache_stats)

    p = sub.add_parser("eval", help="evaluate a saved surrogate")
    p.add_argument("--surrogate", required=True)
    p.add_argument("--theta", help="comma-separated angles")
    p.add_argument("--curve", choices=("gamma1", "gamma2", "gamma3", "gamma4", "gamma5"))
    p.add_argument("--t-grid", dest="t_grid", help="start:stop:count")
    p.add_argument("--output", help="CSV path (curve mode)")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("scan-curve", help="truth vs surrogate along a curve")
    _add_problem_args(p)
    p.add_argument("--surrogate", required=True)
    p.add_argument("--curve", required=True,
                   choices=("gamma1", "gamma2", "gamma3", "gamma4", "gamma5"))
    p.add_argument("--t-grid", dest="t_grid", required=True, help="start:stop:count")
    p.add_argument("--output", required=True, help="CSV path")
    p.set_defaults(handler=cmd_scan_curve)

    p = sub.add_parser("l2-error", help="Monte-Carlo relative L2 error study")
    _add_build_args(p)
    p.add_argument("--k", default="1,2,4,8", help="comma-separated cube shrink factors")
    p.add_argument("--n-f", dest="n_f", type=int, default=300000)
    p.add_argument("--n-diff", dest="n_diff", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sem-threshold", dest="sem_threshold", type=float,
                   default=DEFAULT_SEM_THRESHOLD,
                   help="warn when SEM exceeds this fraction of the mean")
    p.add_argument("--output", required=True, help="CSV path")
    p.set_defaults(handler=cmd_l2_error)

    p = sub.add_parser("bench-circuit", help="print or save a benchmark circuit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(handler=cmd_bench_circuit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
