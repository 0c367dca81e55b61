import numpy as np
import pytest

from tribc.channels import Example1Params, make_example1
from tribc.entropy import Axis, LabeledJointPmf, binary_entropy
from tribc.errors import PreconditionError, SchemaError
from tribc.polytope import evaluate_point
from tribc.regions import lemma1_point, nem_member, nem_system
from tribc.regions.families import (
    corner_test_channel_nem,
    nem_corner_search,
    random_test_channel,
)
from tribc.regions.nem import NEM_AXES, RATE_VARS, lemma3_audit
from tribc.regions.testchannel import TestChannel


PARAMS = Example1Params(0.01, 0.2, 0.2, 0.125)


def all_constant_test_channel():
    ch = make_example1(PARAMS)
    sizes = (1, 1, 1, 1, 1, 1, 1, 1, 8)
    probs = np.zeros(sizes)
    probs[..., 0] = 0.6
    probs[..., 1] = 0.4
    joint = LabeledJointPmf(
        tuple(Axis(n, s) for n, s in zip(NEM_AXES, sizes)), probs
    )
    return TestChannel(joint, ch, {}, tau=0.125)


# --- structure ----------------------------------------------------------------


def test_system_structure():
    tc = corner_test_channel_nem(PARAMS)
    system = nem_system(tc)
    assert len(system.variables) == 21
    assert len(system.nonneg_vars) == 18
    links = [c for c in system.constraints if c.relation == "=="]
    inequalities = [c for c in system.constraints if c.relation != "=="]
    assert len(links) == 3
    # six encoder bounds and five decoder bounds per cyclic triple
    assert len(inequalities) == 6 * 3 + 5 * 3


def test_all_constant_auxiliaries_pin_origin():
    tc = all_constant_test_channel()
    assert nem_member(tc, (0.0, 0.0, 0.0))
    assert not nem_member(tc, (1e-3, 0.0, 0.0))
    assert not nem_member(tc, (0.0, 1e-3, 0.0))
    assert not nem_member(tc, (0.0, 0.0, 1e-3))


def test_membership_downward_closed():
    tc = corner_test_channel_nem(PARAMS)
    point = lemma1_point(0.125, 0.01, 0.2, 0.2)
    inner = (0.3, point[1], point[2])
    assert nem_member(tc, inner)
    rng = np.random.default_rng(8)
    for _ in range(10):
        f = rng.uniform(0, 1, 3)
        smaller = tuple(float(a * b) for a, b in zip(inner, f))
        assert nem_member(tc, smaller)


def test_test_channel_json_with_channel_path(tmp_path):
    tc = corner_test_channel_nem(PARAMS)
    chan_file = tmp_path / "chan.json"
    chan_file.write_text(tc.channel.to_json())
    doc = tc.to_json_dict()
    doc["channel"] = "chan.json"
    back = TestChannel.from_json_dict(doc, base_dir=tmp_path)
    assert back.channel.input_size == 8
    assert np.array_equal(back.joint.probs, tc.joint.probs)
    point = lemma1_point(0.125, 0.01, 0.2, 0.2)
    assert nem_member(back, (0.3, point[1], point[2]))


def test_missing_axes_schema_error():
    ch = make_example1(PARAMS)
    joint = LabeledJointPmf((Axis("Q", 1), Axis("X", 8)), np.full(8, 0.125))
    bad = TestChannel(joint, ch, {}, tau=0.5)
    with pytest.raises(SchemaError):
        nem_system(bad)


# --- lattice oracle at the origin ----------------------------------------------


def origin_bound_rows(tc):
    """Rows of the origin-pinned system over the six bin rates, as arrays."""
    from tribc.polytope import substitute

    system = nem_system(tc)
    pinned = substitute(system, {"R1": 0.0, "R2": 0.0, "R3": 0.0})
    return pinned


def grid_origin_feasible(tc, points, slack_steps):
    """Brute-force lattice search over (S12, S23, S31, S1, S2, S3) with all
    message-rate variables pinned to zero by the links.

    Each bin rate gets its own axis of ``points`` values between 0 and a
    sound per-variable upper bound read off the all-nonnegative decoder
    rows; ``slack_steps`` scales the tolerance by the largest pitch.
    """
    pinned = origin_bound_rows(tc)
    svars = ["S12", "S23", "S31", "S1", "S2", "S3"]
    uppers = []
    for v in svars:
        i = pinned.variables.index(v)
        ub = 1.0
        for c in pinned.constraints:
            if c.relation == "<=" and c.coeffs[i] > 0 and all(x >= 0 for x in c.coeffs):
                ub = min(ub, max(float(c.constant), 0.0) / float(c.coeffs[i]))
        uppers.append(ub)
    axes = [np.linspace(0.0, ub, points) for ub in uppers]
    slack = slack_steps * max((ub / (points - 1) for ub in uppers), default=0.0)
    grids = np.meshgrid(*axes, indexing="ij")
    flat = np.stack([g.reshape(-1) for g in grids], axis=1)  # (N, 6)
    ok = np.ones(len(flat), dtype=bool)
    for c in pinned.constraints:
        coeffs = np.array([float(x) for x in c.coeffs])
        s_coeffs = np.array([coeffs[pinned.variables.index(v)] for v in svars])
        lhs = flat @ s_coeffs  # message vars contribute zero
        if c.relation == "<=":
            ok &= lhs <= float(c.constant) + slack
        elif c.relation == ">=":
            ok &= lhs >= float(c.constant) - slack
        else:
            ok &= np.abs(lhs - float(c.constant)) <= slack
        if not ok.any():
            return False
    return bool(ok.any())


def test_origin_membership_agrees_with_lattice_oracle():
    ch = make_example1(Example1Params(0.05, 0.25, 0.3, 0.2))
    rng = np.random.default_rng(21)
    # one-sided soundness both ways, with slack matched to the lattice pitch
    for trial in range(6):
        sizes = {n: int(rng.integers(1, 3)) for n in NEM_AXES if n != "X"}
        tc = random_test_channel(ch, 0.2, sizes, rng)
        member = nem_member(tc, (0.0, 0.0, 0.0), tol=1e-9)
        if member:
            # a true point exists; the lattice with generous slack finds one
            assert grid_origin_feasible(tc, points=11, slack_steps=8)
        if grid_origin_feasible(tc, points=11, slack_steps=0):
            # an exact lattice point is a certificate for membership
            assert member or nem_member(tc, (0.0, 0.0, 0.0), tol=1e-7)

    # a product channel is feasible at the origin: both oracles say yes
    tc = corner_test_channel_nem(PARAMS)
    assert nem_member(tc, (0.0, 0.0, 0.0))
    assert grid_origin_feasible(tc, points=11, slack_steps=8)


# --- the suboptimality search (smoke; the full run is acceptance) ---------------


def test_corner_excluded_smoke():
    params = Example1Params(0.01, 0.15, 0.15, 0.125)
    result = nem_corner_search(params, count=10, seed=7)
    assert result.separation_condition
    assert result.all_excluded


# --- lemma3 audit ---------------------------------------------------------------


def corner_rates(d2=0.2, d3=0.2, r1=0.3):
    rates = {v: 0.0 for v in RATE_VARS}
    rates["T1"] = r1
    rates["L12"] = 1 - binary_entropy(d2)
    rates["K31"] = 1 - binary_entropy(d3)
    return rates


def test_audit_all_pass_on_corner_construction():
    tc = corner_test_channel_nem(PARAMS)
    report = lemma3_audit(tc, corner_rates(), tol=1e-7)
    assert report.all_pass
    labels = [name for name, _ in report.items]
    assert len(labels) == 6


def test_audit_tolerance_monotone():
    tc = corner_test_channel_nem(PARAMS)
    report = lemma3_audit(tc, corner_rates(), tol=1e-7)
    looser = lemma3_audit(tc, corner_rates(), tol=1e-6)
    assert report.all_pass and looser.all_pass


def test_audit_precondition_rate_targets():
    tc = corner_test_channel_nem(PARAMS)
    rates = corner_rates()
    rates["L12"] = 0.1  # misses the receiver-2 capacity target
    with pytest.raises(PreconditionError):
        lemma3_audit(tc, rates)


def test_audit_precondition_system_violation():
    tc = corner_test_channel_nem(PARAMS)
    rates = corner_rates(r1=0.6)  # beyond receiver 1's decoder bound
    with pytest.raises(PreconditionError):
        lemma3_audit(tc, rates)


def informative_public_test_channel():
    """W is a copy of U12, so I(W U23; Y2 | Q) > 0: the audit identities
    cannot hold and the capacity-target point is not in the region."""
    params = PARAMS
    tau = params.tau
    probs = np.zeros((1, 2, 2, 1, 2, 2, 1, 1, 8))
    for v1 in range(2):
        pv = tau if v1 else 1.0 - tau
        for u12 in range(2):
            for u31 in range(2):
                x = 4 * v1 + 2 * u12 + u31
                probs[0, u12, u12, 0, u31, v1, 0, 0, x] = pv * 0.25
    axes = tuple(
        Axis(n, s) for n, s in zip(NEM_AXES, (1, 2, 2, 1, 2, 2, 1, 1, 8))
    )
    joint = LabeledJointPmf(axes, probs)
    return TestChannel(joint, make_example1(params), {}, tau)


def test_audit_diagnostic_flags_informative_public_layer():
    tc = informative_public_test_channel()
    report = lemma3_audit(tc, corner_rates(), tol=1e-7, enforce_preconditions=False)
    assert not report.all_pass
    item3 = report.item("item3_mutual_informations")
    failed = [c.name for c in item3 if not c.passed]
    assert any("I(W U23; Y2 | Q)" in name for name in failed)
    # cross-check: the capacity-target point is indeed outside the region
    point = lemma1_point(0.125, 0.01, 0.2, 0.2)
    assert not nem_member(tc, (0.01, point[1], point[2]))
    with pytest.raises(PreconditionError):
        lemma3_audit(tc, corner_rates())
