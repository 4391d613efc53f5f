"""Command-line entry point.

Subcommands: solve, scenario, sweep, curvature, check.  Exit codes:
0 success, 1 validation error, 2 convergence failure, 3 I/O error.
Set NMGLAB_THREADS to cap the BLAS thread count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .errors import NotBoundaryPointError, QuadratureError, ValidationError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONVERGENCE = 2
EXIT_IO = 3


def _apply_thread_env():
    n = os.environ.get("NMGLAB_THREADS")
    if n:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, n)


def _add_common(p):
    p.add_argument("--s", type=float, default=None, help="fractional order in (0,1)")
    p.add_argument("--h", type=str, default=None, help="grid spacing as 1/m (e.g. 1/64)")
    p.add_argument("--L", type=float, default=None, help="truncation half-width")
    p.add_argument("--tol", type=float, default=None, help="solver gradient tolerance")
    p.add_argument("--out", type=str, default=None, help="output directory")
    p.add_argument("--levels", type=str, default=None, help="refinement levels: count or list of m")


def build_parser():
    ap = argparse.ArgumentParser(prog="nmglab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="one solve at a single resolution")
    _add_common(p)
    p.add_argument("--datum", choices=["flat", "linear", "two_bump"], default="flat")
    p.add_argument("--bump-height", type=float, default=0.5)
    p.add_argument("--bump-width", type=float, default=0.25)
    p.add_argument("--slope", type=float, default=1.0)
    p.add_argument("--intercept", type=float, default=0.0)
    p.add_argument("--method", choices=["damped-newton", "preconditioned-gradient"], default=None)

    p = sub.add_parser("scenario", help="run a registered scenario with refinement levels")
    p.add_argument("name", nargs="?", default=None, help="scenario name (or give --config)")
    p.add_argument("--config", type=str, default=None, help="flat key:value config file")
    _add_common(p)

    p = sub.add_parser("sweep", help="perturbation sweep (genericity experiment)")
    _add_common(p)
    p.add_argument("--t-values", type=str, default="0.1,0.2,0.4")
    p.add_argument("--center", type=float, default=-1.0, help="perturbation bump center")
    p.add_argument("--width", type=float, default=0.5, help="perturbation bump half-width")

    p = sub.add_parser("curvature", help="principal-value curvature of a prefab planar set")
    p.add_argument("--set", dest="set_name", required=True,
                   choices=["halfplane", "disk", "cone", "barrier", "parabola", "slab"])
    p.add_argument("--point", type=str, required=True, help="evaluation point 'x,y'")
    p.add_argument("--s", type=float, default=0.5)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--radius", type=float, default=1.0, help="disk radius")
    p.add_argument("--cone-slope", type=float, default=1.0)
    p.add_argument("--barrier-slope", type=float, default=1.0)
    p.add_argument("--barrier-bend", type=float, default=1.0)
    p.add_argument("--barrier-delta", type=float, default=0.0)
    p.add_argument("--mu", type=float, default=0.1, help="slab width")

    p = sub.add_parser("check", help="run the randomized invariant suite")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--m", type=int, default=16)
    p.add_argument("--s", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=2024)
    return ap


def _cmd_solve(args) -> int:
    from .domain import GridSpec, flat_datum, linear_datum, two_bump_datum
    from .kernels import FractionalOrder
    from .scenarios import emit_profile, parse_h
    from .solver import SolveOptions, solve

    s = args.s if args.s is not None else 0.5
    m = parse_h(args.h) if args.h else 64
    L = args.L if args.L is not None else 4.0
    order = FractionalOrder(s)
    grid = GridSpec(m, L)
    if args.datum == "flat":
        datum = flat_datum(0.0)
    elif args.datum == "linear":
        datum = linear_datum(args.slope, args.intercept)
    else:
        datum = two_bump_datum(args.bump_height, args.bump_width)
    opts = SolveOptions(
        tolerance=args.tol if args.tol is not None else 1e-9,
        method=args.method or "damped-newton",
    )
    report = solve(datum, grid, order, opts)
    print(
        f"solve: datum={datum.name} s={s} m={m} L={L} -> "
        f"converged={report.converged} iters={report.iterations} "
        f"|grad|={report.final_gradient_norm:.3e} "
        f"max|residual|={np.max(np.abs(report.el_residuals)):.3e}"
    )
    if args.out:
        path = emit_profile(report, os.path.join(args.out, f"profile_m{m}.csv"))
        print(f"wrote {path}")
    return EXIT_OK if report.converged else EXIT_CONVERGENCE


def _cmd_scenario(args) -> int:
    from .scenarios import parse_config, run_scenario

    overrides = {
        "s": args.s,
        "L": args.L,
        "h": args.h,
        "levels": args.levels,
        "tol": args.tol,
        "out": args.out,
    }
    if args.name:
        overrides["scenario"] = args.name
    config = parse_config(args.config, overrides)
    report = run_scenario(config)
    print(json.dumps(report.summary.get("verdict", report.summary), indent=2, default=str))
    for f in report.files:
        print(f"wrote {f}")
    if report.ok:
        return EXIT_OK
    print("FAILURES:", "; ".join(report.failures), file=sys.stderr)
    return EXIT_CONVERGENCE


def _cmd_sweep(args) -> int:
    from .scenarios import parse_config, run_scenario

    overrides = {
        "scenario": "generic_perturbation",
        "s": args.s,
        "L": args.L,
        "h": args.h,
        "levels": args.levels,
        "tol": args.tol,
        "out": args.out,
        "t_values": args.t_values,
        "perturbation_center": args.center,
        "perturbation_width": args.width,
    }
    config = parse_config(None, overrides)
    report = run_scenario(config)
    print(json.dumps(report.summary.get("sweep", {}), indent=2, default=str))
    return EXIT_OK if report.ok else EXIT_CONVERGENCE


def _cmd_curvature(args) -> int:
    from .curvature import set_curvature_2d
    from .geometry import (
        cone_set,
        corner_barrier_set,
        disk_set,
        halfplane_set,
        parabola_set,
        slab_complement_set,
    )
    from .kernels import FractionalOrder

    try:
        x, y = (float(v) for v in args.point.split(","))
    except ValueError:
        raise ValidationError(f"--point must be 'x,y', got {args.point!r}")
    order = FractionalOrder(args.s)
    if args.set_name == "halfplane":
        pset = halfplane_set()
    elif args.set_name == "disk":
        pset = disk_set(radius=args.radius)
    elif args.set_name == "cone":
        pset = cone_set(args.cone_slope)
    elif args.set_name == "barrier":
        pset = corner_barrier_set(args.barrier_delta, args.barrier_slope, args.barrier_bend)
    elif args.set_name == "parabola":
        pset = parabola_set()
    else:
        pset = slab_complement_set(args.mu)
    sample = set_curvature_2d(pset, (x, y), order, args.tol)
    print(
        f"{args.set_name} at ({x}, {y}), s={args.s}: curvature = {sample.value:.10g} "
        f"(estimated error {sample.estimated_error:.2e}, radii {sample.cutoff_radii})"
    )
    return EXIT_OK


def _cmd_check(args) -> int:
    from .checks import run_all

    results = run_all(trials=args.trials, m=args.m, s=args.s, seed=args.seed, progress=print)
    all_ok = True
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}")
        all_ok &= r.passed
    return EXIT_OK if all_ok else EXIT_CONVERGENCE


def main(argv=None) -> int:
    _apply_thread_env()
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "scenario":
            return _cmd_scenario(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "curvature":
            return _cmd_curvature(args)
        if args.command == "check":
            return _cmd_check(args)
        raise ValidationError(f"unknown command {args.command!r}")
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NotBoundaryPointError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except QuadratureError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
