"""Closed-form solutions of the vector inequalities Ax <= d and Bx <= x."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    LOG_TOL,
    InfeasibleError,
    _check,
    _require_square,
    kleene_star,
    trop_matvec,
)

__all__ = ["GeneratorSet", "solve_upper_bound", "solve_closure", "InfeasibleError"]


@dataclass(frozen=True)
class GeneratorSet:
    """Matrix G whose column span {G u : u != 0} is a solution family.

    Positive vectors in the family are obtained for parameter vectors u with
    enough positive components; when G is a closure matrix, G G = G.
    """

    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def column(self, j: int) -> np.ndarray:
        return self.matrix[:, j]

    def sample(self, u_log: np.ndarray) -> np.ndarray:
        """Member G u for a log-domain parameter vector u."""
        return trop_matvec(self.matrix, u_log)


def solve_upper_bound(a: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Maximal x with Ax <= d, namely (d~ A)~ where ~ is conjugation.

    Every x below the returned bound satisfies the inequality and conversely.
    A must be column-regular and d positive (all entries finite in the log
    domain).
    """
    a, d = _check(a), _check(d)
    if a.ndim != 2 or d.ndim != 1 or a.shape[0] != d.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} vs {d.shape}")
    if not np.all(np.isfinite(d)):
        raise ValueError("right-hand side must be positive")
    if not np.all(np.any(np.isfinite(a), axis=0)):
        raise ValueError("matrix must be column-regular")
    # (d~ A)_j = max_i (a_ij - d_i) is finite by column regularity, so the
    # conjugate is plain negation: x_j = min_i (d_i - a_ij).
    return -np.max(a - d[:, None], axis=0)


def solve_closure(b: np.ndarray, tol: float = LOG_TOL) -> GeneratorSet:
    """All positive solutions of Bx <= x, as the span of the closure of B.

    Raises InfeasibleError when some cycle of B exceeds unit weight, in which
    case no positive solution exists.
    """
    b = _require_square(b)
    return GeneratorSet(kleene_star(b, tol=tol))
