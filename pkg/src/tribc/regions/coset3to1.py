"""Coset-code regions for channels whose receivers 2 and 3 are
interference-free: the single-layer region (receiver 1 decodes the sum of
the other users' codewords) and its enlargement with private layers.

Axes: U21, U31 are the coset-coded codebooks over a common prime field
F_q, V1 is receiver 1's codebook, V2, V3 the optional private codebooks.
``USUM`` denotes the derived axis U21 + U31 over F_q.

Two routes are provided for the single-layer region: the direct
inequality list in the message rates, and the raw codebook-rate system
whose projection (eliminating S21, S31, K1) defines the region
operationally.  They are compared, not assumed identical; the raw system
is ground truth.
"""

from __future__ import annotations

import math
from itertools import chain, combinations

from ..entropy import LabeledJointPmf
from ..errors import SchemaError
from ..polytope import RateSystem, feasible, substitute
from ._build import build_system, cond_H, mi, multi_mi, row
from .testchannel import TestChannel

__all__ = [
    "BETA1_AXES",
    "BETA2_AXES",
    "beta1_member",
    "beta1_raw_system",
    "beta1_raw_member",
    "beta2_system",
    "beta2_member",
]

BETA1_AXES = ("U21", "U31", "V1", "X")
BETA2_AXES = ("U21", "U31", "V1", "V2", "V3", "X")
USUM = "USUM"


def _sum_pmf(test: TestChannel) -> tuple[LabeledJointPmf, float]:
    """Composed pmf with the U21+U31 axis, plus log2 of the field size."""
    q = test.field_sizes.get("U21")
    p = test.composed_with_sum("U21", "U31", USUM)
    return p, math.log2(q)


def _check_axes(test: TestChannel, axes) -> None:
    missing = [a for a in axes if a not in test.joint.axis_names]
    if missing:
        raise SchemaError(f"test channel lacks required axes {missing}")


# ---------------------------------------------------------------------------
# single layer: direct inequality list
# ---------------------------------------------------------------------------


def beta1_member(
    test: TestChannel, point: tuple[float, float, float], tol: float = 1e-7
) -> bool:
    """Direct evaluation of the printed inequality list for the
    single-layer region."""
    _check_axes(test, BETA1_AXES)
    p, _ = _sum_pmf(test)
    r1, r2, r3 = (float(v) for v in point)
    if min(r1, r2, r3) < -tol:
        return False
    rs = {2: r2, 3: r3}
    u_of = {2: "U21", 3: "U31"}
    y_of = {2: "Y2", 3: "Y3"}

    if r1 > mi(p, ("V1",), (USUM, "Y1")) + tol:
        return False
    h_v1_given_sum = cond_H(p, ("V1",), (USUM, "Y1"))
    h_v1sum_given_y1 = cond_H(p, ("V1", USUM), ("Y1",))
    for j in (2, 3):
        u, y = u_of[j], y_of[j]
        if rs[j] > mi(p, (u,), (y,)) + tol:
            return False
        if r1 + rs[j] > cond_H(p, ("V1", u)) - cond_H(p, (u,), (y,)) - h_v1_given_sum + tol:
            return False
        if r1 + rs[j] > cond_H(p, ("V1", u)) - h_v1sum_given_y1 + tol:
            return False
    if r2 + r3 > mi(p, ("U21",), ("Y2",)) + mi(p, ("U31",), ("Y3",)) - mi(
        p, ("U21",), ("U31",)
    ) + tol:
        return False
    total = r1 + r2 + r3
    h_all = cond_H(p, ("U21", "U31", "V1"))
    worst_leg = max(cond_H(p, ("U21",), ("Y2",)), cond_H(p, ("U31",), ("Y3",)))
    if total > h_all - h_v1sum_given_y1 - worst_leg + tol:
        return False
    if total > h_all - h_v1_given_sum - cond_H(p, ("U21",), ("Y2",)) - cond_H(
        p, ("U31",), ("Y3",)
    ) + tol:
        return False
    if r1 + total > cond_H(p, ("V1",)) + h_all - 2 * h_v1sum_given_y1 + tol:
        return False
    for j in (2, 3):
        u, y = u_of[j], y_of[j]
        if rs[j] + total > cond_H(p, ("V1", u)) + cond_H(p, ("U21", "U31")) - 2 * cond_H(
            p, (u,), (y,)
        ) - h_v1sum_given_y1 + tol:
            return False
    return True


# ---------------------------------------------------------------------------
# single layer: raw codebook-rate system
# ---------------------------------------------------------------------------

_B1_VARS = ("R1", "R2", "R3", "S21", "S31", "K1", "L1", "T21", "T31")
_B1_RATE_VARS = ("S21", "S31", "K1", "L1", "T21", "T31")


def beta1_raw_system(test: TestChannel) -> RateSystem:
    """The codebook-rate system before eliminating S21, S31, K1.

    Message rates ride on the bin indices: R1 = L1, R2 = T21, R3 = T31.
    """
    if "beta1_raw" in test._cache:
        return test._cache["beta1_raw"]
    _check_axes(test, BETA1_AXES)
    p, logq = _sum_pmf(test)
    rows = []

    def r(terms, rel, const):
        rows.append(row(_B1_VARS, terms, rel, const))

    # encoder finds a jointly typical triple
    r({"S21": 1}, ">=", logq - cond_H(p, ("U21",)))
    r({"S31": 1}, ">=", logq - cond_H(p, ("U31",)))
    r({"K1": 1}, ">=", 0.0)
    r(
        {"S21": 1, "S31": 1},
        ">=",
        2 * logq - cond_H(p, ("U21",)) - cond_H(p, ("U31",)) + mi(p, ("U21",), ("U31",)),
    )
    for u in ("U21", "U31"):
        r(
            {f"S{u[1:]}": 1, "K1": 1},
            ">=",
            logq - cond_H(p, (u,)) + mi(p, (u,), ("V1",)),
        )
    r(
        {"S21": 1, "S31": 1, "K1": 1},
        ">=",
        2 * logq
        - cond_H(p, ("U21",))
        - cond_H(p, ("U31",))
        + multi_mi(p, ("U21",), ("U31",), ("V1",)),
    )
    # receivers 2 and 3 decode their coset codebooks
    r({"S21": 1, "T21": 1}, "<=", logq - cond_H(p, ("U21",), ("Y2",)))
    r({"S31": 1, "T31": 1}, "<=", logq - cond_H(p, ("U31",), ("Y3",)))
    # receiver 1 decodes the codeword sum and then its own codebook
    r(
        {"K1": 1, "L1": 1},
        "<=",
        cond_H(p, ("V1",)) - cond_H(p, ("V1",), (USUM, "Y1")),
    )
    for j in (2, 3):
        r(
            {"K1": 1, "L1": 1, f"S{j}1": 1, f"T{j}1": 1},
            "<=",
            logq + cond_H(p, ("V1",)) - cond_H(p, ("V1", USUM), ("Y1",)),
        )
    # message rates index the bins
    r({"R1": -1, "L1": 1}, "==", 0.0)
    r({"R2": -1, "T21": 1}, "==", 0.0)
    r({"R3": -1, "T31": 1}, "==", 0.0)
    system = build_system(_B1_VARS, rows, _B1_RATE_VARS)
    test._cache["beta1_raw"] = system
    return system


def beta1_raw_member(
    test: TestChannel, point: tuple[float, float, float], tol: float = 1e-7
) -> bool:
    """Membership through the raw system (projection ground truth)."""
    system = beta1_raw_system(test)
    pinned = substitute(
        system, {"R1": float(point[0]), "R2": float(point[1]), "R3": float(point[2])}
    )
    return feasible(pinned, tol=tol)


# ---------------------------------------------------------------------------
# two layers: private codebooks for users 2 and 3
# ---------------------------------------------------------------------------

_B2_VARS = (
    "R1",
    "R2",
    "R3",
    "S21",
    "S31",
    "T21",
    "T31",
    "K1",
    "K2",
    "K3",
    "L1",
    "L2",
    "L3",
)
_B2_RATE_VARS = tuple(v for v in _B2_VARS if not v.startswith("R"))


def _subsets(items):
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


def beta2_system(test: TestChannel) -> RateSystem:
    """Codebook-rate system with private layers for users 2 and 3.

    Links: R1 = L1, R2 = T21 + L2, R3 = T31 + L3.
    """
    if "beta2" in test._cache:
        return test._cache["beta2"]
    _check_axes(test, BETA2_AXES)
    p, logq = _sum_pmf(test)
    rows = []

    def r(terms, rel, const):
        rows.append(row(_B2_VARS, terms, rel, const))

    # encoder finds a jointly typical quintuple: for every subset pair
    for a in _subsets(("U21", "U31")):
        for b in _subsets(("V1", "V2", "V3")):
            if not a and not b:
                continue
            terms = {f"S{u[1:]}": 1 for u in a}
            terms.update({f"K{v[1:]}": 1 for v in b})
            const = (
                len(a) * logq
                + sum(cond_H(p, (v,)) for v in b)
                - cond_H(p, tuple(a) + tuple(b))
            )
            r(terms, ">=", const)
    # receivers 2 and 3 decode a coset codebook and a private codebook
    for j, (u, v, y) in ((2, ("U21", "V2", "Y2")), (3, ("U31", "V3", "Y3"))):
        r({f"S{j}1": 1, f"T{j}1": 1}, "<=", logq - cond_H(p, (u,), (v, y)))
        r({f"K{j}": 1, f"L{j}": 1}, "<=", cond_H(p, (v,)) - cond_H(p, (v,), (y, u)))
        r(
            {f"S{j}1": 1, f"T{j}1": 1, f"K{j}": 1, f"L{j}": 1},
            "<=",
            logq + cond_H(p, (v,)) - cond_H(p, (v, u), (y,)),
        )
    # receiver 1 decodes the codeword sum and then its own codebook
    r(
        {"K1": 1, "L1": 1},
        "<=",
        cond_H(p, ("V1",)) - cond_H(p, ("V1",), (USUM, "Y1")),
    )
    for j in (2, 3):
        r(
            {"K1": 1, "L1": 1, f"S{j}1": 1, f"T{j}1": 1},
            "<=",
            logq + cond_H(p, ("V1",)) - cond_H(p, ("V1", USUM), ("Y1",)),
        )
    # message-rate links
    r({"R1": -1, "L1": 1}, "==", 0.0)
    r({"R2": -1, "T21": 1, "L2": 1}, "==", 0.0)
    r({"R3": -1, "T31": 1, "L3": 1}, "==", 0.0)
    system = build_system(_B2_VARS, rows, _B2_RATE_VARS)
    test._cache["beta2"] = system
    return system


def beta2_member(
    test: TestChannel, point: tuple[float, float, float], tol: float = 1e-7
) -> bool:
    """Whether (R1,R2,R3) is achievable with the two-layer scheme."""
    system = beta2_system(test)
    pinned = substitute(
        system, {"R1": float(point[0]), "R2": float(point[1]), "R3": float(point[2])}
    )
    return feasible(pinned, tol=tol)
