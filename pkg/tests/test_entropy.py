import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tribc.entropy import (
    Axis,
    InfoExpr,
    LabeledJointPmf,
    binary_convolution,
    binary_entropy,
    binary_entropy_inverse,
    ci_check,
    info_quantity,
)
from tribc.errors import DomainError, SchemaError


# --- independent oracles -----------------------------------------------------


def hb_oracle(p: float) -> float:
    # direct evaluation of the defining formula, independent of the library
    out = 0.0
    for q in (p, 1.0 - p):
        if q > 0.0:
            out -= q * math.log(q, 2)
    return out


def hb_inverse_oracle(h: float) -> float:
    lo, hi = 0.0, 0.5
    for _ in range(200):
        mid = (lo + hi) / 2
        if hb_oracle(mid) < h:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def entropy_oracle(flat, base_sizes):
    # plain-loop joint entropy over a flat pmf
    h = 0.0
    for v in flat:
        if v > 0:
            h -= v * math.log(v, 2)
    return h


def make_pmf(axes, flat):
    return LabeledJointPmf(tuple(Axis(n, s) for n, s in axes), np.asarray(flat))


def random_pmf(rng, axes):
    shape = tuple(s for _, s in axes)
    w = rng.random(shape) + 1e-3
    return make_pmf(axes, w / w.sum())


# --- binary_entropy ----------------------------------------------------------


def test_binary_entropy_examples():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    # frozen from the independent formula evaluation
    assert binary_entropy(0.1325) == pytest.approx(hb_oracle(0.1325), abs=1e-15)
    assert binary_entropy(0.1325) == pytest.approx(0.5642547974334596, abs=1e-12)


def test_binary_entropy_domain():
    with pytest.raises(DomainError):
        binary_entropy(-0.01)
    with pytest.raises(DomainError):
        binary_entropy(1.01)


def test_binary_entropy_symmetry_grid():
    for k in range(0, 1001):
        p = k * 1e-3
        assert binary_entropy(p) == pytest.approx(binary_entropy(1 - p), abs=1e-12)


@given(st.floats(0, 1), st.floats(0, 1))
def test_binary_entropy_concavity(a, b):
    mid = binary_entropy((a + b) / 2)
    assert mid >= (binary_entropy(a) + binary_entropy(b)) / 2 - 1e-12


# --- binary_convolution ------------------------------------------------------


def test_binary_convolution_examples():
    for x in (0.0, 0.3, 0.9):
        assert binary_convolution(0.5, x) == pytest.approx(0.5, abs=1e-15)
    assert binary_convolution(0.125, 0.01) == pytest.approx(0.1325, abs=1e-15)
    assert binary_convolution(0.2, 0.0) == pytest.approx(0.2, abs=1e-15)


@given(st.floats(0, 1), st.floats(0, 1))
def test_binary_convolution_commutes(a, b):
    assert binary_convolution(a, b) == pytest.approx(binary_convolution(b, a), abs=1e-15)


def test_binary_convolution_domain():
    with pytest.raises(DomainError):
        binary_convolution(-0.1, 0.5)
    with pytest.raises(DomainError):
        binary_convolution(0.5, 1.2)


# --- binary_entropy_inverse --------------------------------------------------


def test_binary_entropy_inverse_examples():
    assert binary_entropy_inverse(1.0) == 0.5
    assert binary_entropy_inverse(0.0) == 0.0
    got = binary_entropy_inverse(0.78213)
    assert got == pytest.approx(hb_inverse_oracle(0.78213), abs=1e-10)
    assert got == pytest.approx(0.23237584562215868, abs=1e-8)


def test_binary_entropy_inverse_round_trip():
    for k in range(0, 101):
        h = k / 100
        assert binary_entropy(binary_entropy_inverse(h)) == pytest.approx(h, abs=1e-9)


def test_binary_entropy_inverse_domain():
    with pytest.raises(DomainError):
        binary_entropy_inverse(-0.1)
    with pytest.raises(DomainError):
        binary_entropy_inverse(1.1)


# --- LabeledJointPmf ---------------------------------------------------------


def test_pmf_validation():
    with pytest.raises(SchemaError):
        make_pmf([("A", 2), ("A", 2)], [0.25] * 4)
    with pytest.raises(SchemaError):
        make_pmf([("A", 2)], [0.5, 0.6])
    with pytest.raises(SchemaError):
        make_pmf([("A", 2)], [1.1, -0.1])
    with pytest.raises(SchemaError):
        make_pmf([("A", 3)], [0.5, 0.5])


def test_pmf_marginal_order():
    rng = np.random.default_rng(0)
    p = random_pmf(rng, [("A", 2), ("B", 3), ("C", 2)])
    m = p.marginal(["C", "A"])
    assert m.axis_names == ("C", "A")
    direct = p.probs.sum(axis=1).T
    np.testing.assert_allclose(m.probs, direct, atol=1e-15)


def test_pmf_json_round_trip_bit_exact():
    rng = np.random.default_rng(7)
    p = random_pmf(rng, [("A", 2), ("B", 3)])
    text = p.to_json()
    q = LabeledJointPmf.from_json(text)
    assert q.axis_names == p.axis_names
    # the decimal representations written must round-trip exactly
    assert q.to_json() == text
    assert np.array_equal(q.probs, p.probs)


def test_with_derived_axis_xor():
    rng = np.random.default_rng(3)
    p = random_pmf(rng, [("A", 2), ("B", 2)])
    q = p.with_derived_axis("S", 2, ["A", "B"], lambda a, b: (a + b) % 2)
    assert q.axis_names == ("A", "B", "S")
    # S is a function of (A,B): H(S|A,B) = 0
    assert info_quantity(
        q, InfoExpr("conditional_entropy", (("S",),), ("A", "B"))
    ) == pytest.approx(0.0, abs=1e-12)


def test_with_derived_axis_source_order():
    rng = np.random.default_rng(4)
    p = random_pmf(rng, [("A", 2), ("B", 3), ("C", 2)])
    # sources given out of tensor order: value = c*3 + (b % 3) over (C,B)
    q = p.with_derived_axis("D", 6, ["C", "B"], lambda c, b: c * 3 + b)
    for a in range(2):
        for b in range(3):
            for c in range(2):
                d = c * 3 + b
                assert q.probs[a, b, c, d] == pytest.approx(p.probs[a, b, c])
                assert q.probs[a, b, c].sum() == pytest.approx(p.probs[a, b, c])


# --- info_quantity -----------------------------------------------------------


def test_info_quantity_trivial_examples():
    # independent uniform bits
    p = make_pmf([("A", 2), ("B", 2)], [0.25] * 4)
    assert info_quantity(p, InfoExpr("mutual_info", (("A",), ("B",)))) == pytest.approx(
        0.0, abs=1e-12
    )
    # A = B uniform bit
    q = make_pmf([("A", 2), ("B", 2)], [0.5, 0.0, 0.0, 0.5])
    assert info_quantity(
        q, InfoExpr("conditional_entropy", (("A",),), ("B",))
    ) == pytest.approx(0.0, abs=1e-12)
    # C = A xor B with A,B independent uniform
    flat = np.zeros((2, 2, 2))
    for a in range(2):
        for b in range(2):
            flat[a, b, a ^ b] = 0.25
    r = make_pmf([("A", 2), ("B", 2), ("C", 2)], flat)
    got = info_quantity(r, InfoExpr("multi_info", (("A",), ("B",), ("C",))))
    assert got == pytest.approx(1.0, abs=1e-12)


def test_multi_info_expansion_identity():
    rng = np.random.default_rng(11)
    p = random_pmf(rng, [("A", 2), ("B", 3), ("C", 2)])
    whole = info_quantity(p, InfoExpr("multi_info", (("A",), ("B",), ("C",))))
    part1 = info_quantity(p, InfoExpr("mutual_info", (("A",), ("B",))))
    part2 = info_quantity(p, InfoExpr("mutual_info", (("A", "B"), ("C",))))
    assert whole == part1 + part2  # exact by construction


def test_chain_rule_random_pmfs():
    rng = np.random.default_rng(13)
    for _ in range(25):
        p = random_pmf(rng, [("A", 2), ("B", 3)])
        h_ab = p.entropy(["A", "B"])
        h_a = p.entropy(["A"])
        h_b_given_a = info_quantity(
            p, InfoExpr("conditional_entropy", (("B",),), ("A",))
        )
        assert h_ab == pytest.approx(h_a + h_b_given_a, abs=1e-10)


def test_conditional_mi_nonnegative():
    rng = np.random.default_rng(17)
    for _ in range(50):
        p = random_pmf(rng, [("A", 2), ("B", 2), ("C", 3)])
        v = info_quantity(
            p, InfoExpr("conditional_mutual_info", (("A",), ("B",)), ("C",))
        )
        assert v >= -1e-12


def test_info_quantity_unknown_axis():
    p = make_pmf([("A", 2)], [0.5, 0.5])
    with pytest.raises(SchemaError):
        info_quantity(p, InfoExpr("entropy", (("Z",),)))


def test_info_quantity_zero_probability_conditioning():
    # conditioning event B=1 has probability 0 and must be skipped
    p = make_pmf([("A", 2), ("B", 2)], [0.5, 0.0, 0.5, 0.0])
    v = info_quantity(p, InfoExpr("conditional_entropy", (("A",),), ("B",)))
    assert v == pytest.approx(1.0, abs=1e-12)


def test_info_expr_validation():
    with pytest.raises(SchemaError):
        InfoExpr("mutual_info", (("A",),))
    with pytest.raises(SchemaError):
        InfoExpr("mutual_info", (("A",), ("A",)))
    with pytest.raises(SchemaError):
        InfoExpr("entropy", (("A",),), ("B",))
    with pytest.raises(SchemaError):
        InfoExpr("nonsense", (("A",),))


# --- ci_check ----------------------------------------------------------------


def test_ci_check_copies():
    # A = B = C uniform bit: A independent of C given B
    flat = np.zeros((2, 2, 2))
    flat[0, 0, 0] = 0.5
    flat[1, 1, 1] = 0.5
    p = make_pmf([("A", 2), ("B", 2), ("C", 2)], flat)
    assert ci_check(p, ["A"], ["C"], ["B"])
    assert not ci_check(p, ["A"], ["C"], [])


def test_ci_check_empty_conditioner():
    p = make_pmf([("A", 2), ("C", 2)], [0.25] * 4)
    assert ci_check(p, ["A"], ["C"])


def test_ci_check_overlap_rejected():
    p = make_pmf([("A", 2), ("B", 2)], [0.25] * 4)
    with pytest.raises(SchemaError):
        ci_check(p, ["A"], ["A"], ["B"])


def bsc_lift_pmf(rng, eta, na=2, nb=2):
    """Random p_{ABXY} satisfying the two hypothesis chains A-B-Y, AB-X-Y.

    Y = BSC_eta(X); choosing p_{X|AB} to depend on B only forces both
    chains, and the BSC map p_X -> p_Y is invertible for eta != 1/2, so
    every hypothesis-satisfying pmf arises this way.
    """
    p_ab = rng.random((na, nb)) + 1e-3
    p_ab /= p_ab.sum()
    # target p(Y=0|b) inside [eta, 1-eta] so the inverted p(X=0|b) is valid
    y0_given_b = eta + (1 - 2 * eta) * rng.random(nb)
    x0_given_b = (y0_given_b - eta) / (1 - 2 * eta)
    flat = np.zeros((na, nb, 2, 2))
    for a in range(na):
        for b in range(nb):
            for x in range(2):
                px = x0_given_b[b] if x == 0 else 1 - x0_given_b[b]
                for y in range(2):
                    w = (1 - eta) if x == y else eta
                    flat[a, b, x, y] = p_ab[a, b] * px * w
    return make_pmf([("A", na), ("B", nb), ("X", 2), ("Y", 2)], flat)


@settings(deadline=None, max_examples=40)
@given(st.integers(0, 10_000), st.floats(0.01, 0.49))
def test_bsc_markov_lift_property(seed, eta):
    rng = np.random.default_rng(seed)
    p = bsc_lift_pmf(rng, eta)
    # hypotheses hold by construction
    assert ci_check(p, ["A"], ["Y"], ["B"], tol=1e-9)
    assert ci_check(p, ["A", "B"], ["Y"], ["X"], tol=1e-9)
    # the lifted chain
    assert ci_check(p, ["A"], ["X", "Y"], ["B"], tol=1e-9)


def test_bsc_markov_lift_200_pmfs():
    rng = np.random.default_rng(2026)
    for _ in range(200):
        eta = float(rng.uniform(0.01, 0.49))
        p = bsc_lift_pmf(rng, eta)
        assert ci_check(p, ["A"], ["X", "Y"], ["B"], tol=1e-9)
