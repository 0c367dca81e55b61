import numpy as np
import pytest

from tribc.channels import Example1Params, make_example1
from tribc.entropy import Axis, LabeledJointPmf, binary_convolution
from tribc.errors import SchemaError
from tribc.regions import (
    beta1_member,
    beta1_raw_member,
    beta1_raw_system,
    beta2_member,
    beta2_system,
    lemma1_point,
)
from tribc.regions.families import corner_test_channel, random_test_channel
from tribc.regions.testchannel import TestChannel

PARAMS = Example1Params(0.01, 0.2, 0.2, 0.125)
POINT = lemma1_point(0.125, 0.01, 0.2, 0.2)


def beta1_random_channel(rng, params=PARAMS, conc=1.0):
    ch = make_example1(params)
    return random_test_channel(
        ch,
        params.tau,
        {"U21": 2, "U31": 2, "V1": 2},
        rng,
        field_sizes={"U21": 2, "U31": 2},
        concentration=conc,
    )


def beta2_channel_from(tc: TestChannel, v2_size=1, v3_size=1, rng=None):
    """Extend a beta1 test channel with V2, V3 axes (constant by default)."""
    j = tc.joint
    probs = j.probs[..., None, None]
    if v2_size == 1 and v3_size == 1:
        new = np.moveaxis(probs, (-2, -1), (3, 4))
    else:
        raise NotImplementedError
    axes = (
        j.axes[0],
        j.axes[1],
        j.axes[2],
        Axis("V2", 1),
        Axis("V3", 1),
        j.axes[3],
    )
    # joint order: U21, U31, V1, V2, V3, X
    arr = np.zeros(tuple(a.size for a in axes))
    arr[:, :, :, 0, 0, :] = j.probs
    joint = LabeledJointPmf(axes, arr)
    return TestChannel(joint, tc.channel, tc.field_sizes, tc.tau)


# --- corner-point membership (both routes) -----------------------------------


def test_corner_point_member_both_paths():
    tc = corner_test_channel(PARAMS)
    assert beta1_member(tc, POINT, tol=1e-7)
    assert beta1_raw_member(tc, POINT, tol=1e-7)


def test_corner_point_boundary_hypothesis():
    t = binary_convolution(0.125, 0.01)
    params = Example1Params(0.01, t, 0.3, 0.125)  # d2 equals tau*d1 exactly
    tc = corner_test_channel(params)
    point = lemma1_point(0.125, 0.01, t, 0.3)
    assert beta1_member(tc, point, tol=1e-7)
    assert beta1_raw_member(tc, point, tol=1e-7)


def test_scaling_any_coordinate_up_leaves_region():
    tc = corner_test_channel(PARAMS)
    for k in range(3):
        bumped = list(POINT)
        bumped[k] += 1e-3
        assert not beta1_member(tc, tuple(bumped), tol=1e-7)
        assert not beta1_raw_member(tc, tuple(bumped), tol=1e-7)


def test_origin_membership_when_bounds_nonnegative():
    tc = corner_test_channel(PARAMS)
    assert beta1_member(tc, (0.0, 0.0, 0.0))
    assert beta1_raw_member(tc, (0.0, 0.0, 0.0))


# --- raw system structure ------------------------------------------------------


def test_raw_system_structure():
    tc = corner_test_channel(PARAMS)
    system = beta1_raw_system(tc)
    assert len(system.variables) == 9  # three message rates + six codebook rates
    eqs = [c for c in system.constraints if c.relation == "=="]
    ineqs = [c for c in system.constraints if c.relation != "=="]
    assert len(eqs) == 3
    # typical-triple block (7 rows), receiver-2/3 block (2), receiver-1 block (3)
    assert len(ineqs) == 7 + 2 + 3
    assert len(system.nonneg_vars) == 6


def test_field_size_mismatch_rejected():
    ch = make_example1(PARAMS)
    probs = np.zeros((2, 3, 2, 8))
    probs[0, 0, 0, 0] = 1.0
    joint = LabeledJointPmf(
        (Axis("U21", 2), Axis("U31", 3), Axis("V1", 2), Axis("X", 8)), probs
    )
    tc = TestChannel(joint, ch, {"U21": 2, "U31": 3}, tau=0.125)
    with pytest.raises(SchemaError):
        beta1_member(tc, (0.0, 0.0, 0.0))


# --- dual-path comparison -------------------------------------------------------


def test_dual_path_agreement_reported():
    # the printed list is checked against the raw projection; divergences are
    # collected and reported, with the raw system treated as ground truth
    rng = np.random.default_rng(2)
    disagreements = []
    checked = 0
    for c in range(6):
        tc = beta1_random_channel(rng, conc=float(rng.choice((0.5, 1.0, 3.0))))
        for _ in range(25):
            point = tuple(float(v) for v in rng.uniform(0, 0.6, 3))
            a = beta1_member(tc, point, tol=1e-7)
            b = beta1_raw_member(tc, point, tol=1e-7)
            checked += 1
            if a != b:
                disagreements.append((c, point, a, b))
    rate = 1.0 - len(disagreements) / checked
    print(f"\nbeta1 printed-vs-raw agreement: {rate:.3f} over {checked} points")
    for rec in disagreements[:5]:
        print("  disagreement:", rec)
    # the printed list never rejects a point the raw projection accepts
    for _, point, printed, raw in disagreements:
        assert printed or not raw


def test_downward_closure_on_random_points():
    rng = np.random.default_rng(5)
    tc = corner_test_channel(PARAMS)
    for _ in range(10):
        f = rng.uniform(0, 1, 3)
        smaller = tuple(float(a * b) for a, b in zip(POINT, f))
        assert beta1_member(tc, smaller)
        assert beta1_raw_member(tc, smaller)


def test_corner_membership_across_delta_grid():
    # along any path that enlarges min(d2, d3) while the sum-decoding
    # hypothesis holds, the corner point for those deltas stays a member
    t = binary_convolution(0.125, 0.01)
    grid = [t + 0.005, 0.15, 0.2, 0.3, 0.45]
    for d2 in grid:
        for d3 in grid:
            params = Example1Params(0.01, d2, d3, 0.125)
            tc = corner_test_channel(params)
            point = lemma1_point(0.125, 0.01, d2, d3)
            assert beta1_member(tc, point, tol=1e-7), (d2, d3)


# --- two-layer region -----------------------------------------------------------


def test_beta2_structure():
    tc = beta2_channel_from(corner_test_channel(PARAMS))
    system = beta2_system(tc)
    assert len(system.variables) == 13
    eqs = [c for c in system.constraints if c.relation == "=="]
    assert len(eqs) == 3
    ineqs = [c for c in system.constraints if c.relation != "=="]
    # encoder family (2^2 * 2^3 - 1 = 31), receivers 2/3 (6), receiver 1 (3)
    assert len(ineqs) == 31 + 6 + 3


def test_beta2_degenerates_to_beta1():
    rng = np.random.default_rng(11)
    for c in range(4):
        b1 = beta1_random_channel(rng, conc=float(rng.choice((0.5, 1.0, 3.0))))
        b2 = beta2_channel_from(b1)
        for _ in range(12):
            point = tuple(float(v) for v in rng.uniform(0, 0.5, 3))
            assert beta2_member(b2, point) == beta1_raw_member(b1, point), point


def test_beta2_origin_when_satisfiable():
    tc = beta2_channel_from(corner_test_channel(PARAMS))
    assert beta2_member(tc, (0.0, 0.0, 0.0))


def test_beta2_downward_closed():
    tc = beta2_channel_from(corner_test_channel(PARAMS))
    assert beta2_member(tc, POINT)
    rng = np.random.default_rng(23)
    for _ in range(8):
        f = rng.uniform(0, 1, 3)
        smaller = tuple(float(a * b) for a, b in zip(POINT, f))
        assert beta2_member(tc, smaller)
