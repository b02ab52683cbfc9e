"""Max-times scalar and matrix algebra, computed in the log domain.

Values live in the nonnegative reals under (max, *).  Every value is stored
as its natural logarithm, which turns the algebra into (max, +): products
become sums, k-th roots become division by k, and the algebraic zero becomes
the sentinel -inf.  IEEE -inf is absorbing for + and neutral for max, so the
semiring rules hold exactly; the one place IEEE arithmetic would misbehave
(negating -inf during conjugation) is branched explicitly, and +inf / NaN
never enter a matrix.

Matrices and vectors are plain float64 ndarrays of logarithms.  Use
``from_ratios`` / ``to_ratios`` to convert at the boundary.
"""

from __future__ import annotations

from fractions import Fraction
import math

import numpy as np

NEG_INF = float("-inf")

# Comparison tolerance on logarithms.  All supported data are ratios of small
# integers and their roots, far above this scale.
LOG_TOL = 1e-9


class InfeasibleError(ValueError):
    """Constraint system admits no positive solution (closure gate failed).

    Carries the offending cycle weight so callers can report it.
    """

    def __init__(self, trace_log: float, context: str = "constraints"):
        self.trace_log = trace_log
        super().__init__(
            f"infeasible {context}: maximum cycle weight "
            f"{math.exp(trace_log):.6g} exceeds 1"
        )

    @property
    def trace(self) -> float:
        """Offending maximum cycle weight on the ratio scale."""
        return math.exp(self.trace_log)


def _log_entry(value) -> float:
    """Logarithm of one nonnegative entry; accepts Fraction/str/number."""
    if isinstance(value, str):
        value = Fraction(value)
    if isinstance(value, Fraction):
        if value < 0:
            raise ValueError(f"negative entry {value}")
        if value == 0:
            return NEG_INF
        return math.log(value.numerator) - math.log(value.denominator)
    value = float(value)
    if value < 0:
        raise ValueError(f"negative entry {value}")
    if value == 0.0:
        return NEG_INF
    return math.log(value)


def from_ratios(values) -> np.ndarray:
    """Build a log-domain array from ratio-scale entries.

    Entries may be numbers, Fractions, or fraction strings like "1/3";
    zero maps to the -inf sentinel.
    """
    arr = np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=np.float64)
    flat_in, flat_out = arr.ravel(), out.ravel()
    for i, v in enumerate(flat_in):
        flat_out[i] = _log_entry(v)
    return out


def to_ratios(log_values: np.ndarray) -> np.ndarray:
    """Map a log-domain array back to the ratio scale (-inf becomes 0)."""
    out = np.exp(log_values)
    return np.where(np.isneginf(log_values), 0.0, out)


def _check(log_m: np.ndarray) -> np.ndarray:
    m = np.asarray(log_m, dtype=np.float64)
    if np.any(np.isnan(m)) or np.any(np.isposinf(m)):
        raise ValueError("log-domain arrays must not contain NaN or +inf")
    return m


def trop_zeros(shape) -> np.ndarray:
    """All-bottom array (the algebraic zero matrix)."""
    return np.full(shape, NEG_INF)


def trop_identity(n: int) -> np.ndarray:
    """Identity: unit (log 0) on the diagonal, bottom elsewhere."""
    m = np.full((n, n), NEG_INF)
    np.fill_diagonal(m, 0.0)
    return m


def trop_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product: (AB)_ij = max_k (a_ik + b_kj) in the log domain."""
    a, b = _check(a), _check(b)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("trop_matmul expects 2-d arrays")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return np.max(a[:, :, None] + b[None, :, :], axis=1)


def trop_matvec(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Matrix-vector product: (Ax)_i = max_j (a_ij + x_j)."""
    a, x = _check(a), _check(x)
    if a.ndim != 2 or x.ndim != 1 or a.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {x.shape}")
    return np.max(a + x[None, :], axis=1)


def conj_transpose(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose: transpose with entrywise reciprocal.

    Finite entries are negated (reciprocal in the log domain); bottom stays
    bottom by an explicit branch so -inf never flips sign.
    """
    a = _check(a)
    at = a.T if a.ndim == 2 else a
    return np.where(np.isneginf(at), NEG_INF, -at)


def trop_norm(a: np.ndarray) -> float:
    """Norm: the largest entry (log domain)."""
    return float(np.max(_check(a)))


def trace(a: np.ndarray) -> float:
    """Trace: the largest diagonal entry (log domain)."""
    a = _require_square(a)
    return float(np.max(np.diagonal(a)))


def _require_square(a: np.ndarray) -> np.ndarray:
    a = _check(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"square matrix required, got shape {a.shape}")
    return a


def powers(a: np.ndarray, count: int) -> list[np.ndarray]:
    """Successive powers [I, A, A^2, ..., A^count] sharing one pass."""
    a = _require_square(a)
    out = [trop_identity(a.shape[0])]
    for _ in range(count):
        out.append(trop_matmul(out[-1], a))
    return out


def max_cycle_weight(a: np.ndarray) -> float:
    """Cumulative trace over powers 1..n: the largest closed-walk weight.

    This is the feasibility gate for the closure operator: the inequality
    Bx <= x admits positive solutions iff the result is at most log(1) = 0.
    """
    a = _require_square(a)
    n = a.shape[0]
    pw = powers(a, n)
    return max(trace(pw[k]) for k in range(1, n + 1))


def kleene_star(a: np.ndarray, tol: float = LOG_TOL) -> np.ndarray:
    """Closure I + A + ... + A^(n-1), defined when no cycle exceeds unit weight.

    Raises InfeasibleError when the maximum cycle weight is above 1 (beyond
    ``tol`` on logarithms), since then the series diverges.
    """
    a = _require_square(a)
    n = a.shape[0]
    pw = powers(a, n)
    tr = max(trace(pw[k]) for k in range(1, n + 1))
    if tr > tol:
        raise InfeasibleError(tr)
    star = pw[0]
    for k in range(1, n):
        star = np.maximum(star, pw[k])
    return star


def spectral_radius(a: np.ndarray) -> float:
    """Maximum cycle mean: max over k of the k-th root of tr(A^k)."""
    a = _require_square(a)
    n = a.shape[0]
    pw = powers(a, n)
    return max(trace(pw[k]) / k for k in range(1, n + 1))


def is_column_regular(a: np.ndarray) -> bool:
    """True when no column is entirely bottom."""
    a = _check(a)
    return bool(np.all(np.any(np.isfinite(a), axis=0)))


def is_row_regular(a: np.ndarray) -> bool:
    """True when no row is entirely bottom."""
    a = _check(a)
    return bool(np.all(np.any(np.isfinite(a), axis=1)))


def is_positive(a: np.ndarray) -> bool:
    """True when the array has no bottom entries."""
    return bool(np.all(np.isfinite(_check(a))))
