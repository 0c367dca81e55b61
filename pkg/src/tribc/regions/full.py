"""Full three-user coset region: every receiver decodes a codeword sum.

Each user j owns two coset codebooks U_ji, U_jk (one toward each other
user) and a private codebook V_j.  Codebooks U_ij and U_kj, the components
directed at receiver j, live over the same prime field F_{q_j} so their
sum stays inside one coset; receiver j decodes that sum alongside its own
three codebooks.

Variables: bin rates S_ab and message rates T_ab for the six ordered
pairs, private K_j (bin) and L_j (message) rates, with links
R_j = T_ji + T_jk + L_j.
"""

from __future__ import annotations

import math
from itertools import chain, combinations

from ..errors import SchemaError
from ..polytope import RateSystem, feasible, substitute
from ._build import build_system, cond_H, row
from .testchannel import TestChannel

__all__ = ["BETAF_AXES", "PAIRS", "betaf_system", "betaf_member"]

PAIRS = ("12", "13", "21", "23", "31", "32")
BETAF_AXES = tuple(f"U{ab}" for ab in PAIRS) + ("V1", "V2", "V3", "X")

_VARS = (
    ("R1", "R2", "R3")
    + tuple(f"S{ab}" for ab in PAIRS)
    + tuple(f"T{ab}" for ab in PAIRS)
    + ("K1", "K2", "K3", "L1", "L2", "L3")
)
_RATE_VARS = tuple(v for v in _VARS if not v.startswith("R"))


def _subsets(items):
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


def _sum_axes(test: TestChannel):
    """Composed pmf extended with the three receiver-side sum axes."""
    if "betaf_pmf" in test._cache:
        return test._cache["betaf_pmf"]
    from .testchannel import _is_prime

    p = test.composed()
    for j in (1, 2, 3):
        i, k = [o for o in (1, 2, 3) if o != j]
        left, right = f"U{i}{j}", f"U{k}{j}"
        qa, qb = test.field_sizes.get(left), test.field_sizes.get(right)
        if qa is None or qb is None or qa != qb:
            raise SchemaError(
                f"axes {left!r} and {right!r} must share one declared field size"
            )
        q = qa
        if q != 1 and not _is_prime(q):
            raise SchemaError(f"field size {q} is not prime; prime fields only")
        p = p.with_derived_axis(
            f"USUM{j}", q, [left, right], lambda a, b, q=q: (a + b) % q
        )
    test._cache["betaf_pmf"] = p
    return p


def betaf_system(test: TestChannel) -> RateSystem:
    """Build the 21-variable system (18 rate variables plus R1, R2, R3)."""
    if "betaf_system" in test._cache:
        return test._cache["betaf_system"]
    missing = [a for a in BETAF_AXES if a not in test.joint.axis_names]
    if missing:
        raise SchemaError(f"test channel lacks required axes {missing}")
    p = _sum_axes(test)
    logq = {ab: math.log2(test.field_sizes[f"U{ab}"]) for ab in PAIRS}
    rows = []

    def r(terms, rel, const):
        rows.append(row(_VARS, terms, rel, const))

    # encoder finds nine jointly typical codewords
    for a in _subsets(PAIRS):
        for b in _subsets(("V1", "V2", "V3")):
            if not a and not b:
                continue
            terms = {f"S{ab}": 1 for ab in a}
            terms.update({f"K{v[1:]}": 1 for v in b})
            const = (
                sum(logq[ab] for ab in a)
                + sum(cond_H(p, (v,)) for v in b)
                - cond_H(p, tuple(f"U{ab}" for ab in a) + tuple(b))
            )
            r(terms, ">=", const)
    # receiver j decodes its own three codebooks plus the incoming sum
    for j in (1, 2, 3):
        i, k = [o for o in (1, 2, 3) if o != j]
        own = (f"{j}{i}", f"{j}{k}")
        usum, vj, yj = f"USUM{j}", f"V{j}", f"Y{j}"
        lq_j = math.log2(test.field_sizes[f"U{i}{j}"])
        for a_j in _subsets(own):
            comp = tuple(f"U{ab}" for ab in own if ab not in a_j)
            ua = tuple(f"U{ab}" for ab in a_j)
            la = sum(logq[ab] for ab in a_j)
            st = {}
            for ab in a_j:
                st[f"S{ab}"] = 1
                st[f"T{ab}"] = 1
            incoming = ({f"S{i}{j}": 1, f"T{i}{j}": 1}, {f"S{k}{j}": 1, f"T{k}{j}": 1})
            r(dict(st), "<=", la - cond_H(p, ua, comp + (usum, vj, yj)))
            for extra in incoming:
                r(
                    {**st, **extra},
                    "<=",
                    la + lq_j - cond_H(p, ua + (usum,), comp + (vj, yj)),
                )
            private = {f"K{j}": 1, f"L{j}": 1}
            r(
                {**st, **private},
                "<=",
                la + cond_H(p, (vj,)) - cond_H(p, ua + (vj,), comp + (usum, yj)),
            )
            for extra in incoming:
                r(
                    {**st, **private, **extra},
                    "<=",
                    la + lq_j + cond_H(p, (vj,)) - cond_H(p, ua + (vj, usum), comp + (yj,)),
                )
        r({f"R{j}": -1, f"T{j}{i}": 1, f"T{j}{k}": 1, f"L{j}": 1}, "==", 0.0)
    system = build_system(_VARS, rows, _RATE_VARS)
    test._cache["betaf_system"] = system
    return system


def betaf_member(
    test: TestChannel, point: tuple[float, float, float], tol: float = 1e-7
) -> bool:
    """Whether (R1,R2,R3) is achievable with the full coset scheme."""
    system = betaf_system(test)
    pinned = substitute(
        system, {"R1": float(point[0]), "R2": float(point[1]), "R3": float(point[2])}
    )
    return feasible(pinned, tol=tol)
