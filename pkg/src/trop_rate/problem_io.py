"""Problem ingestion and report emission.

Input documents are JSON-shaped: a top-level object with ``criteria`` (array
of ``{"name": ..., "matrix": ...}``), optional ``constraints`` matrix,
optional ``order`` (1-based criterion ranks) and optional ``alternatives``
labels.  Matrix entries are numbers or exact fraction strings like "1/3";
fractions are converted straight to logarithms so golden rational data never
passes through a lossy decimal.  A matrix may also be a string naming a CSV
file (rows of comma-separated entries) relative to the document.

Reports come in two formats: a stable line-oriented text table, and a
structured dict that serializes to JSON, echoes the parsed problem (so a
parse -> emit -> parse round trip preserves every numeric value) and keeps
full-precision rating values next to their 6-significant-digit displays.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .core import InfeasibleError, from_ratios, max_cycle_weight, to_ratios
from .multicriteria import ComparisonProblem, SolutionBundle, reciprocity_report

RECIPROCITY_TOL = 1e-6


class ProblemFormatError(ValueError):
    """Malformed or inconsistent problem document."""


# ---------------------------------------------------------------------------
# parsing

def _load_csv_matrix(path: Path):
    rows = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        rows.append([cell.strip() for cell in line.split(",")])
    if not rows:
        raise ProblemFormatError(f"empty CSV matrix file {path}")
    return rows


def _matrix_entries(spec, base_dir: Path | None, what: str):
    if isinstance(spec, str):
        path = Path(spec)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        if not path.exists():
            raise ProblemFormatError(f"{what}: CSV file {path} not found")
        spec = _load_csv_matrix(path)
    if not isinstance(spec, list) or not spec:
        raise ProblemFormatError(f"{what}: matrix must be a non-empty array of rows")
    n = len(spec)
    for row in spec:
        if not isinstance(row, list) or len(row) != n:
            raise ProblemFormatError(f"{what}: matrix must be square")
    try:
        return from_ratios(spec)
    except (ValueError, ZeroDivisionError) as exc:
        raise ProblemFormatError(f"{what}: {exc}") from exc


def parse_problem(source, tol: float = 1e-9) -> ComparisonProblem:
    """Read and validate a problem document (path, JSON text, or dict).

    Reciprocity deviations beyond 1e-6 become warnings on the returned
    problem; an infeasible constraint matrix is a hard error raised before
    any solving starts.
    """
    base_dir = None
    if isinstance(source, (str, Path)):
        path = Path(source)
        if path.exists():
            base_dir = path.parent
            text = path.read_text()
        else:
            text = str(source)
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ProblemFormatError(f"invalid JSON: {exc}") from exc
    elif isinstance(source, dict):
        doc = source
    elif hasattr(source, "read"):
        try:
            doc = json.load(source)
        except json.JSONDecodeError as exc:
            raise ProblemFormatError(f"invalid JSON: {exc}") from exc
    else:
        raise ProblemFormatError(f"unsupported source {type(source)!r}")

    if not isinstance(doc, dict) or "criteria" not in doc:
        raise ProblemFormatError("document must be an object with a 'criteria' key")
    raw_criteria = doc["criteria"]
    if not isinstance(raw_criteria, list) or not raw_criteria:
        raise ProblemFormatError("'criteria' must be a non-empty array")

    names, matrices = [], []
    for idx, item in enumerate(raw_criteria, start=1):
        if not isinstance(item, dict) or "matrix" not in item:
            raise ProblemFormatError(f"criterion {idx} needs a 'matrix'")
        names.append(str(item.get("name", f"C{idx}")))
        m = _matrix_entries(item["matrix"], base_dir, f"criterion {idx}")
        if not np.all(np.isfinite(m)):
            raise ProblemFormatError(f"criterion {idx} has a nonpositive entry")
        matrices.append(m)
    n = matrices[0].shape[0]
    for idx, m in enumerate(matrices, start=1):
        if m.shape[0] != n:
            raise ProblemFormatError(f"criterion {idx} has size {m.shape[0]}, expected {n}")

    constraints = None
    if doc.get("constraints") is not None:
        constraints = _matrix_entries(doc["constraints"], base_dir, "constraints")
        if constraints.shape[0] != n:
            raise ProblemFormatError("constraint matrix size mismatch")
        tr = max_cycle_weight(constraints)
        if tr > tol:
            raise InfeasibleError(tr)

    order = None
    if doc.get("order") is not None:
        raw = doc["order"]
        if sorted(raw) != list(range(1, len(matrices) + 1)):
            raise ProblemFormatError("'order' must be a permutation of 1..m")
        order = tuple(int(r) - 1 for r in raw)

    alternatives = tuple(str(a) for a in doc.get("alternatives", ()))
    if alternatives and len(alternatives) != n:
        raise ProblemFormatError("one alternative label per row expected")

    try:
        problem = ComparisonProblem(
            criteria=tuple(matrices),
            constraints=constraints,
            names=tuple(names),
            order=order,
            alternatives=alternatives,
            tol=tol,
        )
    except ValueError as exc:
        raise ProblemFormatError(str(exc)) from exc

    warnings = tuple(
        f"criterion {names[l]}: entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) "
        f"deviate from reciprocity by {dev:.3g} (log scale)"
        for l, i, j, dev in reciprocity_report(problem, tol=RECIPROCITY_TOL)
    )
    if warnings:
        problem = ComparisonProblem(
            criteria=problem.criteria,
            constraints=problem.constraints,
            names=problem.names,
            order=problem.order,
            alternatives=problem.alternatives,
            tol=tol,
            warnings=warnings,
        )
    return problem


def problem_document(problem: ComparisonProblem) -> dict:
    """Normalized echo of a problem, parseable by parse_problem."""
    doc = {
        "criteria": [
            {"name": name, "matrix": to_ratios(m).tolist()}
            for name, m in zip(problem.names or
                               [f"C{i+1}" for i in range(problem.m)],
                               problem.criteria)
        ],
        "constraints": to_ratios(problem.constraints).tolist(),
    }
    if problem.order is not None:
        doc["order"] = [i + 1 for i in problem.order]
    if problem.alternatives:
        doc["alternatives"] = list(problem.alternatives)
    return doc


# ---------------------------------------------------------------------------
# baseline

def geometric_mean_ratings(c_log: np.ndarray) -> np.ndarray:
    """Row geometric means of a positive comparison matrix, max-normalized.

    A plain (non-tropical) baseline: the mean of row logarithms is the log
    of the row geometric mean.
    """
    c_log = np.asarray(c_log, dtype=np.float64)
    if c_log.ndim != 2 or c_log.shape[0] != c_log.shape[1]:
        raise ValueError("square matrix required")
    if not np.all(np.isfinite(c_log)):
        raise ValueError("matrix must be positive")
    means = np.mean(c_log, axis=1)
    return np.exp(means - np.max(means))


# ---------------------------------------------------------------------------
# display helpers

def exact_form(value: float) -> str | None:
    """Match a value against p/q or (p/q)*r^(1/k) with small integers."""
    if not (value > 0) or not math.isfinite(value):
        return None
    frac = Fraction(value).limit_denominator(1000)
    if frac > 0 and abs(float(frac) - value) <= 1e-9 * max(1.0, value):
        return str(frac)
    for k in (2, 3, 4, 5, 6):
        hits = []
        for r in range(2, 100):
            q = value / r ** (1.0 / k)
            fq = Fraction(q).limit_denominator(48)
            if fq > 0 and abs(float(fq) - q) <= 1e-9 * max(1.0, q):
                hits.append((r, fq))
        if hits:
            unit = [h for h in hits if h[1] == 1]
            r, fq = unit[0] if unit else hits[0]
            root = f"{r}^(1/{k})"
            return root if fq == 1 else f"{fq}*{root}"
    return None


def level_display(value: float) -> str:
    exact = exact_form(value)
    if exact is not None and "^" in exact:
        return f"{exact} ≈ {value:.4f}"
    if exact is not None:
        return f"{exact} ({value:.4f})"
    return f"{value:.6f}"


def _sig6(values) -> list[str]:
    return [f"{v:.6g}" for v in values]


def _vector_doc(values: np.ndarray) -> dict:
    return {"display": _sig6(values), "values": [float(v) for v in values]}


def ranking_display(ranking) -> str:
    def fmt(groups):
        return " > ".join(
            " = ".join(f"({i + 1})" for i in g) for g in groups
        )

    if ranking.robust:
        return fmt(ranking.by_best)
    return f"by best: {fmt(ranking.by_best)} | by worst: {fmt(ranking.by_worst)}"


def _interval(bundle: SolutionBundle):
    if bundle.unique:
        return None
    if bundle.best is not None:
        lower = np.asarray(bundle.best, dtype=float)
    else:
        lower = np.min(np.stack(bundle.best_candidates), axis=0)
    upper = np.asarray(bundle.worst, dtype=float)
    lo = np.minimum(lower, upper)
    hi = np.maximum(lower, upper)
    return lo, hi


# ---------------------------------------------------------------------------
# reports

def emit_report(bundle: SolutionBundle, fmt: str = "text", problem=None,
                verification=None, baseline=None):
    """Render a solution bundle as text or as a structured document."""
    if fmt == "text":
        return _text_report(bundle, problem, verification, baseline)
    if fmt in ("structured", "json-like"):
        return _structured_report(bundle, problem, verification, baseline)
    raise ValueError(f"unknown format {fmt!r}")


def _step_lines(step) -> str:
    parts = [
        f"step {step.index}:",
        "criteria = " + ",".join(str(l + 1) for l in step.criteria_used),
        f"level = {level_display(step.level)}",
        f"unique = {'yes' if step.unique else 'no'}",
    ]
    if step.per_criterion_levels is not None:
        levels = ", ".join(
            f"{l + 1}:{level_display(v)}"
            for l, v in sorted(step.per_criterion_levels.items())
        )
        parts.append(f"criterion minima = [{levels}]")
    if step.active_after is not None:
        inside = ",".join(str(l + 1) for l in step.active_after)
        parts.append("active after = {" + inside + "}")
    return " | ".join(parts)


def _text_report(bundle, problem, verification, baseline) -> str:
    lines = [f"method: {bundle.method}"]
    if problem is not None and problem.alternatives:
        lines.append("alternatives: " + ", ".join(problem.alternatives))
    for step in bundle.steps:
        lines.append(_step_lines(step))
    if bundle.best is not None:
        lines.append("best : " + ", ".join(_sig6(bundle.best)))
    else:
        for i, cand in enumerate(bundle.best_candidates, start=1):
            lines.append(f"best candidate {i}: " + ", ".join(_sig6(cand)))
        lines.append("best : minimal candidate not uniquely determined")
    lines.append("worst: " + ", ".join(_sig6(bundle.worst)))
    lines.append(f"unique: {'yes' if bundle.unique else 'no'}")
    interval = _interval(bundle)
    if interval is None:
        combined = ", ".join(f"{v:.4f}" for v in bundle.worst)
    else:
        lo, hi = interval
        cells = [
            f"{a:.4f}" if hi[i] - lo[i] <= 5e-5 else f"{lo[i]:.4f}..{hi[i]:.4f}"
            for i, a in enumerate(lo)
        ]
        combined = ", ".join(cells)
    lines.append(f"combined: ({combined})")
    lines.append(
        f"ranking: {ranking_display(bundle.ranking)} "
        f"[{'robust' if bundle.ranking.robust else 'divergent'}]"
    )
    if baseline is not None:
        for name, ratings in baseline:
            lines.append(f"geometric mean {name}: " + ", ".join(_sig6(ratings)))
    if verification is not None:
        ok = "pass" if verification.get("passed") else "FAIL"
        lines.append(
            f"verification: {ok} | grid level = {verification['grid_value']:.6g} "
            f"| gap (log) = {verification['gap_log']:.2e} <= 2h = {verification['two_h']:.2e}"
        )
    return "\n".join(lines) + "\n"


def _structured_report(bundle, problem, verification, baseline) -> dict:
    steps = []
    for step in bundle.steps:
        entry = {
            "step": step.index,
            "criteria": [l + 1 for l in step.criteria_used],
            "level": {
                "exact": exact_form(step.level),
                "value": float(step.level),
                "display": level_display(step.level),
            },
            "unique": step.unique,
        }
        if step.per_criterion_levels is not None:
            entry["per_criterion_levels"] = {
                str(l + 1): float(v) for l, v in step.per_criterion_levels.items()
            }
        if step.active_after is not None:
            entry["index_set"] = [l + 1 for l in step.active_after]
        steps.append(entry)
    ratings = {
        "worst": _vector_doc(bundle.worst),
        "best_candidates": [_vector_doc(c) for c in bundle.best_candidates],
        "best_minimal_unique": bundle.best_minimal_unique,
        "unique": bundle.unique,
    }
    if bundle.best is not None:
        ratings["best"] = _vector_doc(bundle.best)
    interval = _interval(bundle)
    if interval is not None:
        lo, hi = interval
        ratings["interval"] = {
            "lower": [float(v) for v in lo],
            "upper": [float(v) for v in hi],
        }
    doc = {
        "method": bundle.method,
        "steps": steps,
        "ratings": ratings,
        "ranking": {
            "by_best": [[i + 1 for i in g] for g in bundle.ranking.by_best],
            "by_worst": [[i + 1 for i in g] for g in bundle.ranking.by_worst],
            "robust": bundle.ranking.robust,
            "display": ranking_display(bundle.ranking),
        },
    }
    if problem is not None:
        doc["problem"] = problem_document(problem)
        if problem.warnings:
            doc["warnings"] = list(problem.warnings)
    if baseline is not None:
        doc["baseline"] = {
            "geometric_mean": [
                {"criterion": name, "ratings": [float(v) for v in ratings_]}
                for name, ratings_ in baseline
            ]
        }
    if verification is not None:
        doc["verification"] = verification
    return doc
