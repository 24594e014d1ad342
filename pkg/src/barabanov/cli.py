"""Command-line front end: ``barabanov {jsr,bounds,sphere} PROBLEM.json``.

Exit statuses: 0 converged, 2 not converged, 3 invalid input, 4 reducible
matrix set, 5 oracle product cap exceeded.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import export, oracle, relaxation
from .io import Problem, ProblemFileError, atomic_write, canonical_dumps, load_problem
from .linalg import ReducibleSetError
from .relaxation import IterationReport, RelaxationConfig

EXIT_OK = 0
EXIT_NOT_CONVERGED = 2
EXIT_INVALID = 3
EXIT_REDUCIBLE = 4
EXIT_CAP = 5

PROGRESS = "i=%4d, Bounds for J.S.R.: %5.3f < r < %5.3f"


def report_dict(report: IterationReport, problem: Problem) -> dict:
    return {
        "label": problem.label,
        "config": report.config.as_dict(),
        "irreducibility": report.irreducibility.as_dict(),
        "steps": [
            {"n": s.n, "rho_minus": s.rho_minus, "rho_plus": s.rho_plus, "gamma": s.gamma}
            for s in report.steps
        ],
        "iterations": report.iterations,
        "rho_lower": report.rho_lower,
        "rho_upper": report.rho_upper,
        "converged": report.converged,
        "residual": relaxation.residual_for(report, problem.matrix_set),
        "warnings": list(report.warnings),
    }


def _config(args) -> RelaxationConfig:
    return RelaxationConfig(
        nodes=args.nodes,
        tolerance=args.tol,
        max_iters=args.max_iters,
        averaging=args.averaging,
        lookup=args.lookup,
        convexify=args.convexify == "on",
        relative_gap=args.relative_gap,
        force=args.force,
    )


def _out_path(args, suffix: str) -> Path:
    return Path(args.out) / f"{Path(args.problem).stem}.{suffix}"


def _run(args, problem: Problem) -> IterationReport:
    report = relaxation.run(problem.matrix_set, _config(args))
    if not args.quiet:
        for s in report.steps:
            print(PROGRESS % (s.n, s.rho_minus, s.rho_plus))
    return report


def cmd_jsr(args) -> int:
    problem = load_problem(args.problem)
    report = _run(args, problem)
    path = atomic_write(_out_path(args, "report.json"), canonical_dumps(report_dict(report, problem)))
    print(f"rho in [{report.rho_lower:.6f}, {report.rho_upper:.6f}]  converged={report.converged}  report={path}")
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_bounds(args) -> int:
    problem = load_problem(args.problem)
    br = oracle.bracket(problem.matrix_set, args.depth, cap=args.cap, sample=args.sample, seed=args.seed)
    doc = {"label": problem.label, "bounds": br.as_dict()}
    path = atomic_write(_out_path(args, f"bounds-k{args.depth}.json"), canonical_dumps(doc))
    upper = "n/a (sampled)" if br.upper is None else f"{br.upper:.6f}"
    print(f"k={br.depth}: lower={br.lower:.6f} upper={upper} trace={br.trace_estimate:.6f}  report={path}")
    return EXIT_OK


def cmd_sphere(args) -> int:
    problem = load_problem(args.problem)
    report = _run(args, problem)
    doc = report_dict(report, problem)
    status = EXIT_OK if report.converged else EXIT_NOT_CONVERGED
    if report.converged or args.force_output:
        table = export.sphere_table(report.final_norm, problem.matrix_set, report.rho_upper, report.config.lookup)
        crossings = export.level_crossings(table)
        csv_path = atomic_write(_out_path(args, "sphere.csv"), export.sphere_csv(table))
        svg_path = atomic_write(_out_path(args, "sphere.svg"), export.sphere_svg(table, title=problem.label))
        doc["sphere"] = {"level_crossings": crossings, "table": csv_path.name, "svg": svg_path.name}
        for pair, count in crossings.items():
            print(f"level curves {pair}: {count} crossings")
        print(f"sphere: {csv_path}, {svg_path}")
    else:
        print("not converged; sphere not written (use --force-output)", file=sys.stderr)
    atomic_write(_out_path(args, "report.json"), canonical_dumps(doc))
    return status


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nodes", type=int, default=3000, help="grid nodes N (even, >= 8)")
    p.add_argument("--tol", type=float, default=1e-3, help="stop when rho+ - rho- < TOL")
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--averaging", choices=["arith", "geom", "harm"], default="arith")
    p.add_argument("--lookup", choices=["interp", "nearest"], default="interp",
                   help="gauge lookup at image angles; 'nearest' reproduces the original MATLAB code")
    p.add_argument("--convexify", choices=["on", "off"], default="on")
    p.add_argument("--relative-gap", action="store_true", help="stop on (rho+ - rho-)/rho+ < TOL")
    p.add_argument("--force", action="store_true", help="run even on reducible sets")
    p.add_argument("--quiet", action="store_true", help="suppress per-step lines")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="barabanov",
        description="Joint spectral radius and Barabanov norms of 2x2 matrix sets.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jsr", help="run the max-relaxation iteration and write a report")
    p.add_argument("problem")
    p.add_argument("--out", default=".", help="output directory")
    _add_run_flags(p)
    p.set_defaults(func=cmd_jsr)

    p = sub.add_parser("bounds", help="brute-force product bounds at depth k")
    p.add_argument("problem")
    p.add_argument("-k", "--depth", type=int, required=True)
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP, help="max exhaustive products")
    p.add_argument("--sample", action="store_true", help="sample chains beyond the cap (lower bound only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sphere", help="run to convergence and export the unit sphere")
    p.add_argument("problem")
    p.add_argument("--out", default=".")
    p.add_argument("--force-output", action="store_true", help="write geometry even if not converged")
    _add_run_flags(p)
    p.set_defaults(func=cmd_sphere)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ProblemFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ReducibleSetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REDUCIBLE
    except oracle.CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
