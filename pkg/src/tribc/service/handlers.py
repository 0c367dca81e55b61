"""Pure request -> response functions shared by the HTTP app and the CLI."""

from __future__ import annotations

from ..channels import BroadcastChannel, Example1Params, make_example1
from ..coset_sim import SimConfig, simulate_example1
from ..entropy import LabeledJointPmf, info_quantity, parse_expr
from ..gelfand_pinsker import (
    GPInstance,
    OptimizerConfig,
    Prop1Certificate,
    alpha_T,
    alpha_TR,
    prop1_boundary_witness,
    prop1_refute,
)
from ..regions import (
    beta1_member,
    beta1_raw_member,
    beta2_member,
    betaf_member,
    corollary1_report,
    lemma1_point,
    lemma3_audit,
    nem_member,
    theorem2_holds,
)
from ..regions.testchannel import TestChannel
from . import models as m

__all__ = [
    "MEMBERSHIP_TESTS",
    "eval_entropy",
    "corollary1",
    "corner_point",
    "gp_solve",
    "prop1",
    "region_membership",
    "audit",
    "simulate",
    "example1_channel",
    "test_channel_from_model",
]

MEMBERSHIP_TESTS = {
    "nem": nem_member,
    "beta1": beta1_member,
    "beta1_raw": beta1_raw_member,
    "beta2": beta2_member,
    "betaf": betaf_member,
}


def pmf_from_model(model: m.PmfModel) -> LabeledJointPmf:
    return LabeledJointPmf.from_json_dict(model.model_dump())


def pmf_to_model(pmf: LabeledJointPmf) -> m.PmfModel:
    return m.PmfModel(**pmf.to_json_dict())


def channel_from_model(model: m.ChannelModel) -> BroadcastChannel:
    return BroadcastChannel.from_json_dict(model.model_dump())


def test_channel_from_model(model: m.TestChannelModel) -> TestChannel:
    return TestChannel.from_json_dict(model.model_dump())


def eval_entropy(req: m.EntropyRequest) -> m.EntropyResponse:
    pmf = pmf_from_model(req.pmf)
    value = info_quantity(pmf, parse_expr(req.expr))
    return m.EntropyResponse(expr=req.expr, bits=value)


def corollary1(req: m.Corollary1Request) -> m.Corollary1Response:
    rep = corollary1_report(req.delta1, req.tau)
    return m.Corollary1Response(
        delta1=rep.delta1,
        tau=rep.tau,
        low=rep.low,
        high_derived=rep.high_derived,
        published_high=rep.published_high,
        published_window_contained=rep.published_window_contained,
        note=rep.note,
    )


def corner_point(req: m.CornerPointRequest) -> m.CornerPointResponse:
    point = lemma1_point(req.tau, req.delta1, req.delta2, req.delta3)
    separated = theorem2_holds(req.tau, req.delta1, req.delta2, req.delta3)
    return m.CornerPointResponse(point=point, separated_from_layered_region=separated)


def gp_solve(req: m.GPRequest) -> m.GPResponse:
    inst = GPInstance(req.tau, req.delta, req.eps)
    config = OptimizerConfig(
        restarts=req.restarts, max_iters=req.max_iters, tol=req.tol, seed=req.seed
    )
    res = alpha_T(inst, config)
    tr = alpha_TR(inst)
    return m.GPResponse(
        alpha_t=res.value, alpha_tr=tr, gap=tr - res.value, converged=res.converged
    )


def prop1(req: m.Prop1Request) -> m.Prop1Response:
    inst = GPInstance(req.tau, req.delta, req.eps)
    if req.relaxed:
        wit = prop1_boundary_witness(inst)
        return m.Prop1Response(
            all_infeasible=False, boundary_witness=pmf_to_model(wit.joint)
        )
    result = prop1_refute(inst)
    if isinstance(result, Prop1Certificate):
        return m.Prop1Response(
            all_infeasible=result.all_infeasible,
            cases=[
                m.Prop1CaseModel(
                    z_bits=c.z_bits,
                    case_label=c.case_label,
                    violated_identity=c.violated_identity,
                )
                for c in result.cases
            ],
        )
    return m.Prop1Response(
        all_infeasible=False, counterexample=pmf_to_model(result.distribution.joint)
    )


def region_membership(req: m.RegionRequest) -> m.RegionResponse:
    test = test_channel_from_model(req.test_channel)
    member = MEMBERSHIP_TESTS[req.kind](test, req.point, tol=req.tol)
    return m.RegionResponse(kind=req.kind, point=req.point, member=member, tol=req.tol)


def audit(req: m.AuditRequest) -> m.AuditResponse:
    test = test_channel_from_model(req.test_channel)
    report = lemma3_audit(
        test, dict(req.rates), tol=req.tol,
        enforce_preconditions=req.enforce_preconditions,
    )
    return m.AuditResponse(
        all_pass=report.all_pass,
        items=[
            m.AuditItemModel(
                label=label,
                checks=[
                    m.AuditCheckModel(
                        name=c.name, value=c.value, target=c.target, passed=c.passed
                    )
                    for c in checks
                ],
            )
            for label, checks in report.items
        ],
    )


def simulate(req: m.SimRequest) -> m.SimResponse:
    config = SimConfig(
        n=req.n,
        k2=req.k2,
        k3=req.k3,
        bin_bits=tuple(req.bin_bits),
        tau_weight=req.tau_weight,
        deltas=tuple(req.deltas),
        trials=req.trials,
        seed=req.seed,
    )
    stats = simulate_example1(config, threads=max(req.threads, 1))
    return m.SimResponse(
        seed=req.seed,
        n=req.n,
        users=[
            m.UserStatModel(
                user=u.user,
                trials=u.trials,
                errors=u.errors,
                rate_estimate=u.rate_estimate,
                ci_low=u.ci_low,
                ci_high=u.ci_high,
            )
            for u in stats.users
        ],
    )


def example1_channel(req: m.Example1Request) -> m.ChannelModel:
    ch = make_example1(Example1Params(req.delta1, req.delta2, req.delta3, req.tau))
    return m.ChannelModel(**ch.to_json_dict())
