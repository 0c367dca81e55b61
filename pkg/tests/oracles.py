"""Independent brute-force oracles used only by the test suite.

These deliberately avoid the library's own code paths: vertex enumeration
for linear feasibility, interval intersection for one-variable extension,
and a plain-loop reimplementation of the two-user region inequalities.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def system_to_arrays(system):
    """Convert a RateSystem to (A, b) with rows A x <= b, nonneg included."""
    rows = []
    consts = []
    n = len(system.variables)
    for c in system.constraints:
        co = [float(x) for x in c.coeffs]
        if c.relation in ("<=", "=="):
            rows.append(co)
            consts.append(float(c.constant))
        if c.relation in (">=", "=="):
            rows.append([-x for x in co])
            consts.append(-float(c.constant))
    for name in system.nonneg_vars:
        i = system.variables.index(name)
        row = [0.0] * n
        row[i] = -1.0
        rows.append(row)
        consts.append(0.0)
    return np.asarray(rows), np.asarray(consts)


def vertex_feasible(system, tol=1e-7):
    """Feasibility by exhaustive vertex enumeration.

    Sound for bounded polyhedra: generators below always include box
    constraints, so the set is nonempty iff some basic solution (vertex)
    satisfies all rows.
    """
    A, b = system_to_arrays(system)
    m, n = A.shape
    if m < n:
        return True  # unconstrained directions and box rows absent: caller bug
    combos = list(itertools.combinations(range(m), n))
    take = np.asarray(combos)
    mats = A[take]  # (k, n, n)
    rhs = b[take]  # (k, n)
    dets = np.linalg.det(mats)
    ok = np.abs(dets) > 1e-9
    if not ok.any():
        return False
    pts = np.full((len(combos), n), np.nan)
    pts[ok] = np.linalg.solve(mats[ok], rhs[ok][..., None])[..., 0]
    sat = (A @ pts[ok].T <= b[:, None] + tol).all(axis=0)
    return bool(sat.any())


def extension_interval(system, var, partial, tol=1e-9):
    """Feasible interval for ``var`` given values for all other variables."""
    idx = system.variables.index(var)
    A, b = system_to_arrays(system)
    lo, hi = -math.inf, math.inf
    x = np.array(
        [partial.get(v, 0.0) for v in system.variables], dtype=float
    )
    for row, const in zip(A, b):
        a = row[idx]
        rest = float(row @ x) - a * x[idx]
        if abs(a) < 1e-15:
            if rest > const + tol:
                return None
            continue
        bound = (const - rest) / a
        if a > 0:
            hi = min(hi, bound)
        else:
            lo = max(lo, bound)
    if lo > hi + tol:
        return None
    return (lo, hi)


def marton2_bounds_oracle(joint, tol):
    """Direct evaluation of the two-user region bounds from a dict pmf.

    ``joint`` maps (q, w, v1, v2, y1, y2) -> prob.  Returns the three
    right-hand sides (r1_max, r2_max, sum_max) computed with plain loops.
    """

    def H(axes):
        marg = {}
        for key, p in joint.items():
            if p <= 0:
                continue
            k = tuple(key[i] for i in axes)
            marg[k] = marg.get(k, 0.0) + p
        return -sum(p * math.log2(p) for p in marg.values() if p > 0)

    Q, W, V1, V2, Y1, Y2 = range(6)

    def I(a, b, c=()):
        a, b, c = tuple(a), tuple(b), tuple(c)
        return H(a + c) + H(b + c) - H(a + b + c) - H(c)

    r1 = I((W, V1), (Y1,), (Q,))
    r2 = I((W, V2), (Y2,), (Q,))
    common = min(I((W,), (Y1,), (Q,)), I((W,), (Y2,), (Q,)))
    s = (
        common
        + I((V1,), (Y1,), (Q, W))
        + I((V2,), (Y2,), (Q, W))
        - I((V1,), (V2,), (Q, W))
    )
    return r1, r2, s
