"""Brute-force grid verification of optima on small instances.

The oracle exploits scale invariance: solutions are rays, so one coordinate
is pinned to log 1 = 0 and the remaining ones sweep a grid over [-L, 0] in
steps of h; every pin choice is tried.  Constraints are checked with slack h
so that rounding a feasible optimum onto the grid cannot lose it, and every
nearly-feasible point is then repaired onto the exactly feasible set by one
closure multiplication (x -> S x with S the constraint closure, which fixes
feasible points and moves a slack-h point by at most h).  Consequently for
minimization the returned value sits in [opt, opt + h] whenever some optimal
ray enters the search box, giving a 2h certificate with room to spare; the
symmetric argument covers maximization.

Scanning is chunked and delegated to the kernels module (numba or numpy).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import (
    LOG_TOL,
    InfeasibleError,
    _check,
    _require_square,
    is_positive,
    kleene_star,
    max_cycle_weight,
    trop_matvec,
)

DEFAULT_MAX_POINTS = 10**8
_CHUNK = 1 << 18


class InfeasibleAtResolution(RuntimeError):
    """No grid point satisfied the relaxed constraints.

    Distinct from proven infeasibility (InfeasibleError): the feasible cone
    may simply be thinner than the grid resolution.
    """


@dataclass(frozen=True)
class GridSpec:
    """Search box [-half_width, 0] per free coordinate, step size step."""

    half_width: float = 3.0
    step: float = 0.01
    max_points: float = DEFAULT_MAX_POINTS

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.half_width < self.step:
            raise ValueError("half_width must be at least one step")

    def axis_count(self) -> int:
        return int(math.ceil(self.half_width / self.step - 1e-12)) + 1

    def points_per_pin(self, n: int) -> int:
        return self.axis_count() ** (n - 1)

    def validate_size(self, n: int):
        if self.points_per_pin(n) > self.max_points:
            raise ValueError(
                f"grid of {self.points_per_pin(n):.3g} points exceeds the "
                f"cap of {self.max_points:.3g}"
            )


@dataclass(frozen=True)
class OracleResult:
    """Extremal grid value (log and ratio scale) with a feasible witness."""

    log_value: float
    witness_log: np.ndarray
    points_scanned: int

    @property
    def value(self) -> float:
        return math.exp(self.log_value)

    @property
    def witness(self) -> np.ndarray:
        return np.exp(self.witness_log)


def _constraint_triplets(b: np.ndarray):
    idx_i, idx_j = np.nonzero(np.isfinite(b))
    return idx_i.astype(np.int64), idx_j.astype(np.int64), b[idx_i, idx_j]


def _pin_chunks(n: int, pin: int, axis: np.ndarray, chunk: int):
    free = [d for d in range(n) if d != pin]
    total = len(axis) ** len(free)
    shape = (len(axis),) * len(free)
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        idx = np.unravel_index(np.arange(start, stop), shape)
        pts = np.zeros((stop - start, n))
        for d, ids in zip(free, idx):
            pts[:, d] = axis[ids]
        yield pts


def _scan(b: np.ndarray, grid: GridSpec, evaluate, pick_max: bool, tol: float):
    b = _require_square(b)
    n = b.shape[0]
    grid.validate_size(n)
    tr = max_cycle_weight(b)
    if tr > tol:
        raise InfeasibleError(tr)
    star = kleene_star(b, tol=tol)
    ci, cj, cw = _constraint_triplets(b)
    slack = grid.step
    axis = -grid.step * np.arange(grid.axis_count())
    sign = -1.0 if pick_max else 1.0
    best_val = np.inf
    best_point = None
    scanned = 0
    for pin in range(n):
        for pts in _pin_chunks(n, pin, axis, _CHUNK):
            scanned += pts.shape[0]
            vals, feas = evaluate(pts, star, ci, cj, cw, slack)
            vals = np.where(feas, sign * vals, np.inf)
            k = int(np.argmin(vals))
            if vals[k] < best_val:
                best_val = vals[k]
                best_point = pts[k].copy()
    if best_point is None or not np.isfinite(best_val):
        raise InfeasibleAtResolution(
            f"no feasible grid point at step {grid.step}"
        )
    witness = trop_matvec(star, best_point)  # exact repair of the winner
    witness = witness - np.max(witness)
    return sign * best_val, witness, scanned


def grid_min_objective(a: np.ndarray, b: np.ndarray, grid: GridSpec,
                       tol: float = LOG_TOL) -> OracleResult:
    """Grid minimum of max_ij (a_ij + y_j - y_i) subject to the bounds b.

    A must be positive.  The witness is an exactly feasible normalized point
    achieving the returned value.
    """
    a = _require_square(a)
    if not is_positive(a):
        raise ValueError("objective matrix must be positive")

    def evaluate(pts, star, ci, cj, cw, slack):
        return kernels.scan_objective(pts, a, star, ci, cj, cw, slack)

    value, witness, scanned = _scan(b, grid, evaluate, pick_max=False, tol=tol)
    return OracleResult(log_value=float(value), witness_log=witness,
                        points_scanned=scanned)


def grid_extremize_seminorm(b: np.ndarray, grid: GridSpec, sense: str,
                            tol: float = LOG_TOL) -> OracleResult:
    """Grid extremum of the spread max_i y_i - min_j y_j subject to b."""
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")

    def evaluate(pts, star, ci, cj, cw, slack):
        return kernels.scan_spread(pts, star, ci, cj, cw, slack)

    value, witness, scanned = _scan(
        b, grid, evaluate, pick_max=(sense == "max"), tol=tol
    )
    return OracleResult(log_value=float(value), witness_log=witness,
                        points_scanned=scanned)


@dataclass(frozen=True)
class MembershipReport:
    """Feasibility and optimality certificate for one rating vector."""

    objective_log: float
    objective_ok: bool
    constraint_slack: float
    constraints_ok: bool

    @property
    def passed(self) -> bool:
        return self.objective_ok and self.constraints_ok


def verify_membership(x_log: np.ndarray, a: np.ndarray, b: np.ndarray,
                      level_log: float, tol: float = LOG_TOL) -> MembershipReport:
    """Check x~ A x <= level and Bx <= x for a positive log-domain vector."""
    x_log = _check(np.asarray(x_log, dtype=np.float64))
    if not np.all(np.isfinite(x_log)):
        raise ValueError("vector must be positive")
    a = _require_square(a)
    b = _require_square(b)
    objective = float(np.max(a + x_log[None, :] - x_log[:, None]))
    cons = trop_matvec(b, x_log) - x_log
    slack = float(np.max(cons)) if cons.size else -np.inf
    return MembershipReport(
        objective_log=objective,
        objective_ok=objective <= level_log + tol,
        constraint_slack=slack,
        constraints_ok=slack <= tol,
    )
