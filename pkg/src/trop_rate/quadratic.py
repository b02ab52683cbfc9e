"""Minimize the ratio form x~ A x subject to Bx <= x.

The objective max_ij (a_ij + x_j - x_i) measures the worst log-ratio spread
of A against the rank-one pattern x_i - x_j.  Its constrained minimum has a
closed form: the largest k-th root of traces of alternating products
A B^{i1} ... A B^{ik} with i1+...+ik <= n-k, and the full solution set is the
column span of the closure of (A - value) max B.

Two engines compute the optimum:

* ``enumerate`` walks every factor sequence depth-first with cached powers
  of B and running prefix products.  Term count is 2^n - 1, practical for
  n <= 12; a guard rejects n > 16.
* ``bisect`` finds the least t such that ((A - t) max B) passes the closure
  feasibility gate, by monotone bisection on t.  Cost O(n^4 log(1/eps)),
  the default for n > 12.

Both agree to well below 1e-9 on logarithms; the engine is chosen per call,
via the TROP_RATE_ENGINE environment variable, or by the size default.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .core import (
    LOG_TOL,
    InfeasibleError,
    _require_square,
    kleene_star,
    max_cycle_weight,
    powers,
    spectral_radius,
    trop_matmul,
    trop_zeros,
)
from .solvers import GeneratorSet

ENGINES = ("enumerate", "bisect")
_ENUM_LIMIT = 16       # hard guard: sequence count doubles per dimension
_ENUM_DEFAULT_MAX = 12  # above this, default to bisection

_BISECT_WIDTH = 1e-12


@dataclass(frozen=True)
class QuadraticSolution:
    """Optimum of the ratio form together with its solution family.

    value is the log-domain optimum; merged is (A - value) max B, whose
    closure generates every solution.
    """

    value: float
    merged: np.ndarray
    generator: GeneratorSet


def _resolve_engine(engine: str | None, n: int) -> str:
    if engine is None:
        engine = os.environ.get("TROP_RATE_ENGINE", "").strip().lower() or None
    if engine is None:
        return "enumerate" if n <= _ENUM_DEFAULT_MAX else "bisect"
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}, expected one of {ENGINES}")
    return engine


def _validate(a: np.ndarray, b: np.ndarray | None, tol: float):
    a = _require_square(a)
    n = a.shape[0]
    if b is None:
        b = trop_zeros((n, n))
    else:
        b = _require_square(b)
        if b.shape[0] != n:
            raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    lam = spectral_radius(a)
    if not np.isfinite(lam):
        raise ValueError("objective matrix has zero spectral radius")
    tr_b = max_cycle_weight(b)
    if tr_b > tol:
        raise InfeasibleError(tr_b)
    return a, b, n, lam


def _min_value_enumerate(a: np.ndarray, b: np.ndarray, n: int) -> float:
    if n > _ENUM_LIMIT:
        raise ValueError(
            f"enumeration engine limited to n <= {_ENUM_LIMIT} (got {n}); "
            "use engine='bisect'"
        )
    b_pow = powers(b, n - 1)
    a_with = [trop_matmul(a, p) for p in b_pow]  # A B^i for i = 0..n-1
    best = -np.inf

    def recurse(prefix: np.ndarray, depth: int, used: int):
        nonlocal best
        t = np.max(np.diagonal(prefix)) / depth
        if t > best:
            best = t
        if depth == n:
            return
        for i in range(n - depth - used):
            recurse(trop_matmul(prefix, a_with[i]), depth + 1, used + i)

    for i in range(n):
        recurse(a_with[i], 1, i)
    return float(best)


def _min_value_bisect(a: np.ndarray, b: np.ndarray, n: int, lam: float) -> float:
    def feasible(t: float) -> bool:
        return max_cycle_weight(np.maximum(a - t, b)) <= 0.0

    lo = lam  # the optimum is never below the pure-cycle mean of A
    if feasible(lo):
        return float(lo)
    span = 1.0
    hi = lo + span
    while not feasible(hi):
        span *= 2.0
        hi = lo + span
    while hi - lo > _BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return float(hi)


def min_objective(
    a: np.ndarray,
    b: np.ndarray | None = None,
    engine: str | None = None,
    tol: float = LOG_TOL,
) -> float:
    """Log-domain minimum of x~ A x over positive x with Bx <= x.

    ``b=None`` means no constraints, in which case the minimum reduces to
    the spectral radius of A.
    """
    a, b, n, lam = _validate(a, b, tol)
    engine = _resolve_engine(engine, n)
    if engine == "enumerate":
        return _min_value_enumerate(a, b, n)
    return _min_value_bisect(a, b, n, lam)


def solve(
    a: np.ndarray,
    b: np.ndarray | None = None,
    engine: str | None = None,
    tol: float = LOG_TOL,
) -> QuadraticSolution:
    """Optimum plus the generator of all solutions of the constrained problem.

    The solution set equals the positive solutions of (merged) x <= x, where
    merged = (A - value) max B; its closure spans every solution.
    """
    a, b, n, lam = _validate(a, b, tol)
    engine = _resolve_engine(engine, n)
    if engine == "enumerate":
        value = _min_value_enumerate(a, b, n)
    else:
        value = _min_value_bisect(a, b, n, lam)
    merged = np.maximum(a - value, b)
    return QuadraticSolution(
        value=value,
        merged=merged,
        generator=GeneratorSet(kleene_star(merged, tol=tol)),
    )
