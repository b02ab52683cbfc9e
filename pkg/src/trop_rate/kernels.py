"""Scan kernels for the grid oracle, with a numba fast path.

Both implementations share one contract.  Given a batch of log-domain points
y (rows), a closure matrix S, constraint triplets (i, j, w) meaning
w + y_j - y_i <= slack, and for the objective variant a positive matrix A,
they return per-point values together with a feasibility mask:

* objective: value = max_ij (a_ij + y'_j - y'_i) after the closure repair
  y'_i = max_j (s_ij + y_j), which maps any nearly-feasible point onto an
  exactly feasible one at most one grid step away;
* spread:    value = max_i y'_i - min_i y'_i after the same repair.

Values at infeasible points are unspecified; mask out before reducing.

The environment variable TROP_RATE_JIT selects the path: unset or truthy
uses numba when it imports cleanly, "0"/"false" forces pure numpy.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

NEG_INF = float("-inf")

_jit_cache: dict[str, object] = {}


def jit_requested() -> bool:
    flag = os.environ.get("TROP_RATE_JIT", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


def jit_active() -> bool:
    """True when the numba kernels are both requested and importable."""
    return jit_requested() and _load_numba() is not None


# ---------------------------------------------------------------------------
# pure numpy path

def scan_objective_numpy(points, obj, star, ci, cj, cw, slack):
    points = np.ascontiguousarray(points, dtype=np.float64)
    if ci.size:
        viol = cw[None, :] + points[:, cj] - points[:, ci]
        feas = np.all(viol <= slack, axis=1)
    else:
        feas = np.ones(points.shape[0], dtype=bool)
    rep = np.max(points[:, None, :] + star[None, :, :], axis=2)
    vals = np.max(obj[None, :, :] + rep[:, None, :] - rep[:, :, None], axis=(1, 2))
    return vals, feas


def scan_spread_numpy(points, star, ci, cj, cw, slack):
    points = np.ascontiguousarray(points, dtype=np.float64)
    if ci.size:
        viol = cw[None, :] + points[:, cj] - points[:, ci]
        feas = np.all(viol <= slack, axis=1)
    else:
        feas = np.ones(points.shape[0], dtype=bool)
    rep = np.max(points[:, None, :] + star[None, :, :], axis=2)
    vals = np.max(rep, axis=1) - np.min(rep, axis=1)
    return vals, feas


# ---------------------------------------------------------------------------
# numba path, compiled lazily on first use

def _build_numba():
    from numba import njit, prange

    @njit(cache=True, parallel=True)
    def scan_objective_nb(points, obj, star, ci, cj, cw, slack):  # pragma: no cover
        m, n = points.shape
        vals = np.empty(m, dtype=np.float64)
        feas = np.zeros(m, dtype=np.bool_)
        for p in prange(m):
            ok = True
            for c in range(ci.size):
                if cw[c] + points[p, cj[c]] - points[p, ci[c]] > slack:
                    ok = False
                    break
            feas[p] = ok
            if not ok:
                vals[p] = np.inf
                continue
            best = NEG_INF
            rep = np.empty(n, dtype=np.float64)
            for i in range(n):
                acc = NEG_INF
                for j in range(n):
                    v = star[i, j] + points[p, j]
                    if v > acc:
                        acc = v
                rep[i] = acc
            for i in range(n):
                for j in range(n):
                    v = obj[i, j] + rep[j] - rep[i]
                    if v > best:
                        best = v
            vals[p] = best
        return vals, feas

    @njit(cache=True, parallel=True)
    def scan_spread_nb(points, star, ci, cj, cw, slack):  # pragma: no cover
        m, n = points.shape
        vals = np.empty(m, dtype=np.float64)
        feas = np.zeros(m, dtype=np.bool_)
        for p in prange(m):
            ok = True
            for c in range(ci.size):
                if cw[c] + points[p, cj[c]] - points[p, ci[c]] > slack:
                    ok = False
                    break
            feas[p] = ok
            if not ok:
                vals[p] = 0.0
                continue
            hi = NEG_INF
            lo = np.inf
            for i in range(n):
                acc = NEG_INF
                for j in range(n):
                    v = star[i, j] + points[p, j]
                    if v > acc:
                        acc = v
                if acc > hi:
                    hi = acc
                if acc < lo:
                    lo = acc
            vals[p] = hi - lo
        return vals, feas

    return {"objective": scan_objective_nb, "spread": scan_spread_nb}


def _load_numba():
    if "table" not in _jit_cache:
        try:
            _jit_cache["table"] = _build_numba()
        except ImportError:
            warnings.warn("numba unavailable; falling back to numpy kernels")
            _jit_cache["table"] = None
    return _jit_cache["table"]


# ---------------------------------------------------------------------------
# dispatch

def _prepare(points, star, ci, cj, cw):
    return (
        np.ascontiguousarray(points, dtype=np.float64),
        np.ascontiguousarray(star, dtype=np.float64),
        np.ascontiguousarray(ci, dtype=np.int64),
        np.ascontiguousarray(cj, dtype=np.int64),
        np.ascontiguousarray(cw, dtype=np.float64),
    )


def scan_objective(points, obj, star, ci, cj, cw, slack):
    points, star, ci, cj, cw = _prepare(points, star, ci, cj, cw)
    obj = np.ascontiguousarray(obj, dtype=np.float64)
    if jit_requested():
        table = _load_numba()
        if table is not None:
            return table["objective"](points, obj, star, ci, cj, cw, float(slack))
    return scan_objective_numpy(points, obj, star, ci, cj, cw, slack)


def scan_spread(points, star, ci, cj, cw, slack):
    points, star, ci, cj, cw = _prepare(points, star, ci, cj, cw)
    if jit_requested():
        table = _load_numba()
        if table is not None:
            return table["spread"](points, star, ci, cj, cw, float(slack))
    return scan_spread_numpy(points, star, ci, cj, cw, slack)
