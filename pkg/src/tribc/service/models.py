"""Request/response models for the HTTP service and the CLI plumbing."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class AxisModel(BaseModel):
    name: str
    size: int


class PmfModel(BaseModel):
    axes: list[AxisModel]
    probs: list[float]


class ChannelModel(BaseModel):
    input_size: int
    output_sizes: list[int]
    transition: list[float]
    cost: list[float]
    factorization: Optional[list[list[int]]] = None


class TestChannelModel(BaseModel):
    joint: PmfModel
    channel: ChannelModel
    field_sizes: dict[str, int] = Field(default_factory=dict)
    tau: float


class EntropyRequest(BaseModel):
    pmf: PmfModel
    expr: str


class EntropyResponse(BaseModel):
    expr: str
    bits: float


class Corollary1Request(BaseModel):
    delta1: float
    tau: float


class Corollary1Response(BaseModel):
    delta1: float
    tau: float
    low: float
    high_derived: float
    published_high: float
    published_window_contained: bool
    note: str


class CornerPointRequest(BaseModel):
    tau: float
    delta1: float
    delta2: float
    delta3: float


class CornerPointResponse(BaseModel):
    point: tuple[float, float, float]
    separated_from_layered_region: bool


class GPRequest(BaseModel):
    tau: float
    delta: float
    eps: float
    restarts: int = 64
    max_iters: int = 60
    tol: float = 1e-10
    seed: int = 0


class GPResponse(BaseModel):
    alpha_t: float
    alpha_tr: float
    gap: float
    converged: bool


class Prop1Request(BaseModel):
    tau: float
    delta: float
    eps: float
    relaxed: bool = False


class Prop1CaseModel(BaseModel):
    z_bits: str
    case_label: str
    violated_identity: str


class Prop1Response(BaseModel):
    all_infeasible: bool
    cases: list[Prop1CaseModel] = Field(default_factory=list)
    counterexample: Optional[PmfModel] = None
    boundary_witness: Optional[PmfModel] = None


class RegionRequest(BaseModel):
    kind: Literal["nem", "beta1", "beta1_raw", "beta2", "betaf"]
    test_channel: TestChannelModel
    point: tuple[float, float, float]
    tol: float = 1e-7


class RegionResponse(BaseModel):
    kind: str
    point: tuple[float, float, float]
    member: bool
    tol: float


class AuditCheckModel(BaseModel):
    name: str
    value: float
    target: float
    passed: bool


class AuditItemModel(BaseModel):
    label: str
    checks: list[AuditCheckModel]


class AuditRequest(BaseModel):
    test_channel: TestChannelModel
    rates: dict[str, float]
    tol: float = 1e-7
    enforce_preconditions: bool = True


class AuditResponse(BaseModel):
    all_pass: bool
    items: list[AuditItemModel]


class SimRequest(BaseModel):
    n: int
    k2: int
    k3: int
    bin_bits: tuple[int, int, int]
    tau_weight: float
    deltas: tuple[float, float, float]
    trials: int
    seed: int = 0
    threads: int = 1


class UserStatModel(BaseModel):
    user: int
    trials: int
    errors: int
    rate_estimate: float
    ci_low: float
    ci_high: float


class SimResponse(BaseModel):
    seed: int
    n: int
    users: list[UserStatModel]


class Example1Request(BaseModel):
    delta1: float
    delta2: float
    delta3: float
    tau: float
