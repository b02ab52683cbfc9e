"""Best and worst differentiating vectors of a generated solution family.

The spread of a positive vector is measured by the multiplicative Hilbert
seminorm max_i x_i / min_j x_j (in the log domain, max minus min).  Over a
family {G u}, the normalized vector maximizing the spread is a normalized
column of G with the largest column spread; the normalized vector minimizing
it is the entrywise reciprocal of the column maxima.  The best solution
distinguishes the top-rated alternative most sharply, the worst least.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    LOG_TOL,
    _check,
    _require_square,
    conj_transpose,
    is_positive,
    kleene_star,
    powers,
    trop_matmul,
    trop_norm,
)
from .solvers import GeneratorSet


@dataclass(frozen=True)
class BestSolution:
    """Maximizers of the spread over a solution family, max-normalized.

    candidates holds every normalized column attaining the maximal spread
    (deduplicated).  minimal is the candidate dominated by all others when
    one exists; with several incomparable candidates it is None and
    minimal_unique is False.
    """

    candidates: tuple[np.ndarray, ...]
    minimal: np.ndarray | None
    minimal_unique: bool
    seminorm: float


@dataclass(frozen=True)
class SeminormExtremum:
    """Extremal spread value over a constraint set, with its generator."""

    value: float
    generator: GeneratorSet


def column_spread(column: np.ndarray) -> float:
    """Hilbert seminorm of one positive column (log domain)."""
    return float(np.max(column) - np.min(column))


def best_solution(gen: GeneratorSet, tol: float = LOG_TOL) -> BestSolution:
    """Spread-maximizing normalized vectors of the family {G u}.

    Only columns without bottom entries are candidates: a column with a
    bottom entry cannot produce a positive vector on its own.
    """
    g = _check(gen.matrix)
    finite = np.all(np.isfinite(g), axis=0)
    if not np.any(finite):
        raise ValueError("no positive column in the generator")
    spreads = np.where(finite, np.max(g, axis=0) - np.min(g, axis=0), -np.inf)
    top = float(np.max(spreads))
    candidates: list[np.ndarray] = []
    for j in np.flatnonzero(spreads >= top - tol):
        cand = g[:, j] - np.max(g[:, j])
        if not any(np.allclose(cand, c, atol=tol) for c in candidates):
            candidates.append(cand)
    minimal = None
    for cand in candidates:
        if all(np.all(cand <= other + tol) for other in candidates):
            minimal = cand
            break
    return BestSolution(
        candidates=tuple(candidates),
        minimal=minimal,
        minimal_unique=minimal is not None,
        seminorm=top,
    )


def worst_solution(gen: GeneratorSet) -> np.ndarray:
    """Spread-minimizing normalized vector: reciprocal column maxima of G.

    This is the unique maximal normalized solution; its spread equals the
    largest entry of G.
    """
    g = _check(gen.matrix)
    col_max = np.max(g, axis=0)
    if not np.all(np.isfinite(col_max)):
        raise ValueError("generator has an all-bottom column")
    return -col_max


def is_unique(gen: GeneratorSet, tol: float = LOG_TOL) -> bool:
    """True when all columns are collinear, i.e. the family is a single ray.

    In the log domain two columns are collinear when their difference is
    constant on entries where both are finite and their bottom patterns
    coincide.
    """
    g = _check(gen.matrix)
    base = g[:, 0]
    base_finite = np.isfinite(base)
    for j in range(1, g.shape[1]):
        col = g[:, j]
        finite = np.isfinite(col)
        if not np.array_equal(finite, base_finite):
            return False
        if not np.any(finite):
            continue
        diff = col[finite] - base[finite]
        if np.max(diff) - np.min(diff) > tol:
            return False
    return True


def max_seminorm_generators(b: np.ndarray, tol: float = LOG_TOL) -> SeminormExtremum:
    """All positive spread maximizers subject to Bx <= x, for positive B.

    The maximum equals the norm of S S~ where S is the closure of B.  The
    generator is S M~ S max S, where M keeps the single entry of S at row
    argmin within the column of largest spread.
    """
    b = _require_square(b)
    if not is_positive(b):
        raise ValueError("matrix must have no zero entries")
    star = kleene_star(b, tol=tol)
    spreads = np.max(star, axis=0) - np.min(star, axis=0)
    k = int(np.argmax(spreads))
    l = int(np.argmin(star[:, k]))
    n = b.shape[0]
    pick = np.full((n, n), -np.inf)
    pick[l, k] = star[l, k]
    g = np.maximum(trop_matmul(trop_matmul(star, conj_transpose(pick)), star), star)
    value = trop_norm(trop_matmul(star, conj_transpose(star)))
    return SeminormExtremum(value=value, generator=GeneratorSet(g))


def min_seminorm_generators(b: np.ndarray, tol: float = LOG_TOL) -> SeminormExtremum:
    """All positive spread minimizers subject to Bx <= x.

    The minimum equals the norm of the closure S of B.  The generator stacks
    the scaled outer products B^i 1 1^T B^j over i + j <= n - 1 on top of S.
    """
    b = _require_square(b)
    n = b.shape[0]
    star = kleene_star(b, tol=tol)
    norm_star = trop_norm(star)
    pw = powers(b, n - 1)
    row_max = [np.max(p, axis=1) for p in pw]  # B^i 1
    col_max = [np.max(p, axis=0) for p in pw]  # 1^T B^j
    g = star.copy()
    for i in range(n):
        for j in range(n - i):
            term = row_max[i][:, None] + col_max[j][None, :] - norm_star
            g = np.maximum(g, term)
    return SeminormExtremum(value=norm_star, generator=GeneratorSet(g))
