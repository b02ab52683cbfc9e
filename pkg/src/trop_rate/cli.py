"""Command line interface.

Exit codes: 0 success, 2 parse or validation error, 3 infeasible
constraints, 4 verification tolerance failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .core import InfeasibleError, trop_norm
from .multicriteria import (
    ComparisonProblem,
    lex_max_ordering,
    lex_ordering,
    max_ordering,
)
from .problem_io import (
    ProblemFormatError,
    emit_report,
    geometric_mean_ratings,
    parse_problem,
)

PIPELINES = {
    "max": max_ordering,
    "lex": lex_ordering,
    "lexmax": lex_max_ordering,
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trop-rate",
        description="Constrained ratings from multicriteria pairwise comparisons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    solve = sub.add_parser("solve", help="solve a problem document")
    solve.add_argument("file", help="problem document (JSON)")
    solve.add_argument(
        "--method", choices=[*PIPELINES, "all"], default="max",
        help="optimality principle (default: max)",
    )
    solve.add_argument(
        "--order", default=None,
        help="comma-separated 1-based criterion ranks for the lex modes",
    )
    solve.add_argument(
        "--verify", default=None, metavar="h=H[,L=L]",
        help="cross-check the final level against the grid oracle",
    )
    solve.add_argument(
        "--baseline", choices=["geomean"], default=None,
        help="add per-criterion geometric-mean ratings",
    )
    solve.add_argument(
        "--format", choices=["text", "json-like"], default="text",
        dest="fmt", help="report format",
    )
    solve.add_argument("--tol", type=float, default=1e-9,
                       help="comparison tolerance on logarithms")
    return parser


def _parse_verify(spec: str) -> dict:
    out = {}
    for piece in spec.split(","):
        piece = piece.strip()
        if not piece:
            continue
        key, _, value = piece.partition("=")
        if key.strip().lower() not in ("h", "l"):
            raise ValueError(f"unknown verify option {key!r}")
        out[key.strip().lower()] = float(value)
    if "h" not in out:
        raise ValueError("--verify needs h=<step>")
    return out


def _verify_bundle(bundle, problem, params: dict) -> dict:
    from .oracle import GridSpec, grid_min_objective, verify_membership

    final = bundle.steps[-1]
    prev = (
        bundle.steps[-2].merged_log
        if len(bundle.steps) > 1
        else problem.constraints
    )
    h = params["h"]
    width = params.get(
        "l", trop_norm(final.generator.matrix) + 2 * h + 0.1
    )
    grid = GridSpec(half_width=max(width, h), step=h)
    result = grid_min_objective(final.objective_log, prev, grid, tol=problem.tol)
    level_log = math.log(final.level)
    gap = abs(level_log - result.log_value)
    checks = {}
    vectors = {"worst": bundle.worst}
    if bundle.best is not None:
        vectors["best"] = bundle.best
    for tag, vec in vectors.items():
        report = verify_membership(
            np.log(vec), final.objective_log, prev, level_log, tol=problem.tol
        )
        checks[tag] = {
            "objective_ok": report.objective_ok,
            "constraints_ok": report.constraints_ok,
        }
    passed = gap <= 2 * h and all(
        c["objective_ok"] and c["constraints_ok"] for c in checks.values()
    )
    return {
        "h": h,
        "half_width": grid.half_width,
        "grid_value": result.value,
        "grid_log": result.log_value,
        "level": final.level,
        "gap_log": gap,
        "two_h": 2 * h,
        "membership": checks,
        "passed": passed,
    }


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        problem = parse_problem(args.file, tol=args.tol)
        if args.order is not None:
            order = tuple(int(x) - 1 for x in args.order.split(","))
            problem = ComparisonProblem(
                criteria=problem.criteria,
                constraints=problem.constraints,
                names=problem.names,
                order=order,
                alternatives=problem.alternatives,
                tol=args.tol,
                warnings=problem.warnings,
            )
        verify_params = _parse_verify(args.verify) if args.verify else None
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ProblemFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    for warning in problem.warnings:
        print(f"warning: {warning}", file=sys.stderr)

    baseline = None
    if args.baseline == "geomean":
        names = problem.names or [f"C{i+1}" for i in range(problem.m)]
        baseline = [
            (name, geometric_mean_ratings(c))
            for name, c in zip(names, problem.criteria)
        ]

    methods = list(PIPELINES) if args.method == "all" else [args.method]
    failed_verification = False
    reports = {}
    try:
        for key in methods:
            bundle = PIPELINES[key](problem)
            verification = None
            if verify_params is not None:
                verification = _verify_bundle(bundle, problem, verify_params)
                failed_verification |= not verification["passed"]
            reports[key] = emit_report(
                bundle, "json-like" if args.fmt == "json-like" else "text",
                problem=problem, verification=verification, baseline=baseline,
            )
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    if args.fmt == "json-like":
        payload = reports[methods[0]] if len(methods) == 1 else {
            "methods": reports
        }
        print(json.dumps(payload, indent=2))
    else:
        print(("\n" + "-" * 64 + "\n").join(reports[k].rstrip("\n") for k in methods))

    return 4 if failed_verification else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
