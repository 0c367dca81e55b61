"""Three-user layered random-coding region: system builder and membership.

Axes: Q (time sharing), W (public), U12/U23/U31 (pairwise semi-private),
V1/V2/V3 (private), X.  The rate system has 18 nonnegative codebook-rate
variables plus free message rates R1, R2, R3:

* public message rates K1, K2, K3;
* per pair (i,j) in {(1,2),(2,3),(3,1)}: semi-private message rates Kij
  (decoded toward user j) and Lij (toward user i) plus the bin rate Sij;
* private message rates T1, T2, T3 and bin rates S1, S2, S3;
* links R_j = T_j + K_jk + L_ij + K_j over the cyclic triples.

The encoder-success bounds lower-bound sums of bin rates by the mutual
information the codewords must share; the decoder bounds upper-bound the
codebook loads at each receiver.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..entropy import binary_entropy
from ..errors import PreconditionError, SchemaError
from ..polytope import RateSystem, evaluate_point, feasible, substitute
from ._build import build_system, mi, multi_mi, row
from .testchannel import TestChannel

__all__ = [
    "NEM_AXES",
    "nem_system",
    "nem_member",
    "Lemma3Report",
    "lemma3_audit",
]

NEM_AXES = ("Q", "W", "U12", "U23", "U31", "V1", "V2", "V3", "X")

_TRIPLES = ((1, 2, 3), (2, 3, 1), (3, 1, 2))
_PAIRS = ((1, 2), (2, 3), (3, 1))

RATE_VARS = (
    ["K1", "K2", "K3"]
    + [f"K{i}{j}" for i, j in _PAIRS]
    + [f"L{i}{j}" for i, j in _PAIRS]
    + [f"S{i}{j}" for i, j in _PAIRS]
    + ["T1", "T2", "T3", "S1", "S2", "S3"]
)
ALL_VARS = tuple(["R1", "R2", "R3"] + RATE_VARS)


def _u(a: int, b: int) -> str:
    if (a, b) in _PAIRS:
        return f"U{a}{b}"
    if (b, a) in _PAIRS:
        return f"U{b}{a}"
    raise AssertionError((a, b))


def _check_axes(test: TestChannel) -> None:
    missing = [a for a in NEM_AXES if a not in test.joint.axis_names]
    if missing:
        raise SchemaError(f"test channel lacks required axes {missing}")


def nem_system(test: TestChannel) -> RateSystem:
    """Build the 21-variable system for this test channel.

    Entropic constants are computed once and cached on the test channel.
    """
    if "nem_system" in test._cache:
        return test._cache["nem_system"]
    _check_axes(test)
    p = test.composed()
    qw = ("Q", "W")
    all_u = ("U12", "U23", "U31")
    rows = []

    def r(terms, rel, const):
        rows.append(row(ALL_VARS, terms, rel, const))

    for (i, j, k) in _TRIPLES:
        uij, ujk, uki = _u(i, j), _u(j, k), _u(k, i)
        vi, vj = f"V{i}", f"V{j}"
        # encoder-success lower bounds on bin rates
        r({f"S{i}": 1}, ">=", 0.0)
        r({f"S{uij[1:]}": 1, f"S{ujk[1:]}": 1}, ">=", mi(p, (uij,), (ujk,), qw))
        triple_mi = multi_mi(p, (uij,), (ujk,), (uki,), qw)
        s_all = {f"S{uij[1:]}": 1, f"S{ujk[1:]}": 1, f"S{uki[1:]}": 1}
        r(dict(s_all), ">=", triple_mi)
        vi_excess = mi(p, (vi,), (ujk,), (uij, uki) + qw)
        r({f"S{i}": 1, **s_all}, ">=", triple_mi + vi_excess)
        vj_excess = mi(p, (vj,), (uki,), (uij, ujk) + qw)
        pair_private = mi(p, (vi,), (vj,), all_u + qw)
        r(
            {f"S{i}": 1, f"S{j}": 1, **s_all},
            ">=",
            vi_excess + vj_excess + triple_mi + pair_private,
        )
        vk_excess = mi(p, (f"V{k}",), (uij,), (ujk, uki) + qw)
        triple_private = multi_mi(p, (f"V{i}",), (f"V{j}",), (f"V{k}",), qw + all_u)
        r(
            {"S1": 1, "S2": 1, "S3": 1, "S12": 1, "S23": 1, "S31": 1},
            ">=",
            vi_excess + vj_excess + vk_excess + triple_mi + triple_private,
        )
        # decoder bounds at receiver i
        yi = (f"Y{i}",)
        cross = mi(p, (uij,), (uki,), qw)
        r({f"T{i}": 1, f"S{i}": 1}, "<=", mi(p, (vi,), yi, qw + (uij, uki)))
        load_ij = {f"K{uij[1:]}": 1, f"L{uij[1:]}": 1, f"S{uij[1:]}": 1}
        load_ki = {f"K{uki[1:]}": 1, f"L{uki[1:]}": 1, f"S{uki[1:]}": 1}
        own = {f"T{i}": 1, f"S{i}": 1}
        r(
            {**load_ij, **own},
            "<=",
            mi(p, (uij, vi), yi, qw + (uki,)) + cross,
        )
        r(
            {**load_ki, **own},
            "<=",
            mi(p, (uki, vi), yi, qw + (uij,)) + cross,
        )
        r(
            {**load_ij, **load_ki, **own},
            "<=",
            mi(p, (uij, uki, vi), yi, qw) + cross,
        )
        r(
            {"K1": 1, "K2": 1, "K3": 1, **load_ij, **load_ki, **own},
            "<=",
            mi(p, ("W", uij, uki, vi), yi, ("Q",)) + cross,
        )
    # message-rate links
    for (i, j, k) in _TRIPLES:
        r(
            {f"R{j}": -1, f"T{j}": 1, f"K{_u(j, k)[1:]}": 1, f"L{_u(i, j)[1:]}": 1, f"K{j}": 1},
            "==",
            0.0,
        )
    system = build_system(ALL_VARS, rows, RATE_VARS)
    test._cache["nem_system"] = system
    return system


def nem_member(
    test: TestChannel, point: tuple[float, float, float], tol: float = 1e-7
) -> bool:
    """Whether (R1,R2,R3) is achievable for this test channel."""
    system = nem_system(test)
    pinned = substitute(
        system, {"R1": float(point[0]), "R2": float(point[1]), "R3": float(point[2])}
    )
    return feasible(pinned, tol=tol)


# ---------------------------------------------------------------------------
# audit of the rate-saturating test-channel structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lemma3Check:
    name: str
    value: float
    target: float
    passed: bool


@dataclass(frozen=True)
class Lemma3Report:
    items: tuple[tuple[str, tuple[Lemma3Check, ...]], ...]
    all_pass: bool

    def item(self, label: str) -> tuple[Lemma3Check, ...]:
        for name, checks in self.items:
            if name == label:
                return checks
        raise KeyError(label)


def _bsc_crossover(test: TestChannel, receiver: int, tol: float) -> float:
    """Crossover of the point-to-point leg feeding the given receiver."""
    fac = test.channel.factorization
    if fac is None:
        raise SchemaError("channel factorization required to identify the BSC legs")
    w = test.channel.transition
    marg = w.sum(axis=tuple(a for a in (1, 2, 3) if a != receiver))
    coord = fac[receiver - 1]
    rows = {}
    for x in range(test.channel.input_size):
        rows.setdefault(coord[x], marg[x])
        if abs(marg[x] - rows[coord[x]]).max() > tol:
            raise PreconditionError(
                f"receiver {receiver} leg is not point-to-point in coordinate {receiver}"
            )
    if sorted(rows) != [0, 1]:
        raise PreconditionError(f"receiver {receiver} leg is not binary")
    d = float(rows[0][1])
    if abs(rows[1][0] - d) > tol or not 0.0 < d < 0.5:
        raise PreconditionError(
            f"receiver {receiver} leg is not a BSC with crossover in (0, 0.5)"
        )
    return d


def lemma3_audit(
    test: TestChannel,
    rates: dict[str, float],
    tol: float = 1e-7,
    enforce_preconditions: bool = True,
) -> Lemma3Report:
    """Audit the structural identities forced on any test channel whose
    rate assignment feeds receivers 2 and 3 at their point-to-point
    capacities.

    ``rates`` assigns all 18 codebook-rate variables.  The precondition
    (assignment satisfies the rate system and meets both capacity targets)
    is checked unless ``enforce_preconditions`` is False, which produces a
    purely diagnostic report.
    """
    _check_axes(test)
    missing = [v for v in RATE_VARS if v not in rates]
    if missing:
        raise SchemaError(f"rate assignment missing variables {missing}")
    d2 = _bsc_crossover(test, 2, tol)
    d3 = _bsc_crossover(test, 3, tol)
    target2 = 1.0 - binary_entropy(d2)
    target3 = 1.0 - binary_entropy(d3)
    full = dict(rates)
    for (i, j, k) in _TRIPLES:
        full[f"R{j}"] = (
            rates[f"T{j}"] + rates[f"K{_u(j, k)[1:]}"] + rates[f"L{_u(i, j)[1:]}"] + rates[f"K{j}"]
        )
    if enforce_preconditions:
        if abs(full["R2"] - target2) > tol or abs(full["R3"] - target3) > tol:
            raise PreconditionError(
                "assignment does not meet the capacity targets: "
                f"R2={full['R2']!r} vs {target2!r}, R3={full['R3']!r} vs {target3!r}"
            )
        if not evaluate_point(nem_system(test), full, tol=tol):
            raise PreconditionError(
                "assignment does not satisfy the rate system for this test channel"
            )

    fac = test.channel.factorization
    p = test.composed()
    p = p.with_derived_axis("X2", max(fac[1]) + 1, ["X"], _coord_fn(fac[1]))
    p = p.with_derived_axis("X3", max(fac[2]) + 1, ["X"], _coord_fn(fac[2]))
    qw = ("Q", "W")

    def close(name, value, target=0.0):
        return Lemma3Check(name, float(value), float(target), abs(value - target) <= tol)

    item1 = tuple(
        [close(f"{v} = 0", rates[v]) for v in ("K1", "K2", "K3", "K23", "L23", "K12", "L31", "S2", "S3")]
        + [
            close(
                "I(U31 V1 V3; Y2 | Q W U23 U12 V2) = 0",
                mi(p, ("U31", "V1", "V3"), ("Y2",), qw + ("U23", "U12", "V2")),
            )
        ]
    )
    item2 = (
        close("S31 = I(U31;U23|QW)", rates["S31"], mi(p, ("U31",), ("U23",), qw)),
        close("S12 = I(U12;U23|QW)", rates["S12"], mi(p, ("U12",), ("U23",), qw)),
        close("S23 = 0", rates["S23"]),
        close("I(U12;U31|QW U23) = 0", mi(p, ("U12",), ("U31",), qw + ("U23",))),
    )
    item3 = (
        close(
            "I(V2 U12; V3 U31 | QW U23) = 0",
            mi(p, ("V2", "U12"), ("V3", "U31"), qw + ("U23",)),
        ),
        close("I(W U23; Y2 | Q) = 0", mi(p, ("W", "U23"), ("Y2",), ("Q",))),
        close("I(W U23; Y3 | Q) = 0", mi(p, ("W", "U23"), ("Y3",), ("Q",))),
        close(
            "I(V2 U12; Y2 | QW U23) = 1-h(d2)",
            mi(p, ("V2", "U12"), ("Y2",), qw + ("U23",)),
            target2,
        ),
        close(
            "I(V3 U31; Y3 | QW U23) = 1-h(d3)",
            mi(p, ("V3", "U31"), ("Y3",), qw + ("U23",)),
            target3,
        ),
    )
    item4 = (
        close(
            "(V3 X3 V1 U31) - (QW U23 U12 V2) - (X2 Y2)",
            mi(p, ("V3", "X3", "V1", "U31"), ("X2", "Y2"), qw + ("U23", "U12", "V2")),
        ),
        close(
            "(V2 X2 V1 U12) - (QW U23 U31 V3) - (X3 Y3)",
            mi(p, ("V2", "X2", "V1", "U12"), ("X3", "Y3"), qw + ("U23", "U31", "V3")),
        ),
    )
    item5 = (
        close(
            "X2 - (QW U12 U23 U31) - X3",
            mi(p, ("X2",), ("X3",), qw + ("U12", "U23", "U31")),
        ),
    )
    item6 = (
        close(
            "U12 - (QW U23 U31) - X3",
            mi(p, ("U12",), ("X3",), qw + ("U23", "U31")),
        ),
        close(
            "U31 - (QW U23 U12) - X2",
            mi(p, ("U31",), ("X2",), qw + ("U23", "U12")),
        ),
    )
    items = (
        ("item1_zero_rates", item1),
        ("item2_bin_rates", item2),
        ("item3_mutual_informations", item3),
        ("item4_receiver_chains", item4),
        ("item5_input_coordinates", item5),
        ("item6_cross_codebooks", item6),
    )
    all_pass = all(c.passed for _, checks in items for c in checks)
    return Lemma3Report(items, all_pass)


def _coord_fn(table):
    import numpy as np

    arr = np.asarray(table)

    def fn(x):
        return arr[x]

    return fn
