"""Binary additive channel with state known at the transmitter.

The channel is Y = X + S + N over GF(2) with N ~ Bernoulli(delta), state
S ~ Bernoulli(eps), and a Hamming cost budget P(X=1) <= tau.  Two
capacities matter here:

* state at both ends: C = h(tau*delta) - h(delta), in closed form;
* state at the transmitter only: the best value of I(U;Y) - I(U;S) over
  joint distributions p(U,S,X,Y) with |U| <= 4, the cap justified by the
  standard cardinality bound min(|X||S|, |X|+|S|+|Y|-2) = 4.

The optimizer reports a certified lower bound (every iterate is a valid
member of the feasible set) plus a convergence flag, never a claim of
global optimality.  The impossibility certificate enumerates all 256
deterministic maps X = f(U,S) and proves, in exact rational arithmetic,
that no joint distribution meets the four no-rate-loss conditions when
eps lies strictly inside (0,1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .entropy import Axis, LabeledJointPmf, binary_convolution, binary_entropy
from .errors import DomainError, PreconditionError, SchemaError
from .polytope import LinearConstraint, RateSystem, feasible_with_witness

__all__ = [
    "GPInstance",
    "GPDistribution",
    "OptimizerConfig",
    "GPResult",
    "GapResult",
    "alpha_TR",
    "alpha_T",
    "rate_loss_gap",
    "NoRateLossFlags",
    "no_rate_loss_report",
    "Prop1Case",
    "Prop1Certificate",
    "Prop1Counterexample",
    "prop1_refute",
    "prop1_boundary_witness",
]

_U_SIZE = 4


@dataclass(frozen=True)
class GPInstance:
    """(tau, delta, eps) with theta = delta(1-tau) + (1-delta)tau derived."""

    tau: float
    delta: float
    eps: float

    def __post_init__(self) -> None:
        if not 0.0 < self.tau < 0.5:
            raise DomainError(f"tau must lie strictly inside (0, 0.5), got {self.tau}")
        if not 0.0 < self.delta < 0.5:
            raise DomainError(
                f"delta must lie strictly inside (0, 0.5), got {self.delta}"
            )
        if not 0.0 <= self.eps <= 1.0:
            raise DomainError(f"eps must lie in [0, 1], got {self.eps}")

    @property
    def theta(self) -> float:
        return binary_convolution(self.delta, self.tau)


@dataclass(frozen=True)
class GPDistribution:
    """A candidate joint over axes U (size <= 4), S, X, Y for an instance."""

    instance: GPInstance
    joint: LabeledJointPmf

    def __post_init__(self) -> None:
        names = self.joint.axis_names
        if names != ("U", "S", "X", "Y"):
            raise SchemaError(f"axes must be (U, S, X, Y), got {names}")
        if self.joint.axis_size("U") > _U_SIZE:
            raise SchemaError("auxiliary alphabet larger than the cardinality cap 4")
        for ax in ("S", "X", "Y"):
            if self.joint.axis_size(ax) != 2:
                raise SchemaError(f"axis {ax} must be binary")
        inst = self.instance
        p = self.joint.probs
        s1 = float(p.sum(axis=(0, 2, 3))[1])
        if abs(s1 - inst.eps) > 1e-9:
            raise SchemaError(f"P(S=1) = {s1!r} does not match eps = {inst.eps!r}")
        x1 = float(p.sum(axis=(0, 1, 3))[1])
        if x1 > inst.tau + 1e-9:
            raise SchemaError(f"P(X=1) = {x1!r} exceeds the budget tau = {inst.tau!r}")
        pxs = p.sum(axis=0)  # (s, x, y)
        for s in range(2):
            for x in range(2):
                mass = pxs[s, x].sum()
                if mass <= 0:
                    continue
                good = pxs[s, x, x ^ s] / mass
                if abs(good - (1 - inst.delta)) > 1e-9:
                    raise SchemaError(
                        f"P(Y = x^s | x={x}, s={s}) = {good!r}, expected 1-delta"
                    )
        # the channel must also ignore U given (X, S)
        for u in range(self.joint.axis_size("U")):
            for s in range(2):
                for x in range(2):
                    mass = p[u, s, x].sum()
                    if mass <= 0:
                        continue
                    good = p[u, s, x, x ^ s] / mass
                    if abs(good - (1 - inst.delta)) > 1e-9:
                        raise SchemaError(
                            "channel law depends on the auxiliary: "
                            f"P(Y=x^s | u={u}, x={x}, s={s}) = {good!r}"
                        )

    def objective(self) -> float:
        """I(U;Y) - I(U;S) in bits."""
        j = self.joint
        return (
            j.entropy(["Y"])
            - j.entropy(["U", "Y"])
            + j.entropy(["U", "S"])
            - j.entropy(["S"])
        )


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 64
    max_iters: int = 60
    tol: float = 1e-10
    seed: int = 0

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "OptimizerConfig":
        return cls(
            restarts=int(doc.get("restarts", 64)),
            max_iters=int(doc.get("max_iters", 60)),
            tol=float(doc.get("tol", 1e-10)),
            seed=int(doc.get("seed", 0)),
        )

    @classmethod
    def from_json(cls, text: str) -> "OptimizerConfig":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class GPResult:
    value: float
    witness: GPDistribution
    converged: bool


@dataclass(frozen=True)
class GapResult:
    gap: float
    alpha_t: float
    alpha_tr: float
    converged: bool


def alpha_TR(inst: GPInstance) -> float:
    """Capacity with the state known at both ends: h(tau*delta) - h(delta).

    Independent of eps; achieved only by S independent of X with
    P(X=1) = tau.
    """
    return binary_entropy(binary_convolution(inst.tau, inst.delta)) - binary_entropy(
        inst.delta
    )


# ---------------------------------------------------------------------------
# the transmitter-only optimizer
# ---------------------------------------------------------------------------
# State: rows p(u, x | s) flattened to 8 cells per s, batched.  All moves
# exchange mass between two cells of one conditional row, so every iterate
# stays a valid member of the feasible set (simplex rows, cost budget).

_XBIT = np.array([c & 1 for c in range(8)], dtype=np.float64)


def _channel_tensor(delta: float) -> np.ndarray:
    w = np.zeros((2, 2, 2))  # (s, x, y)
    for s in range(2):
        for x in range(2):
            w[s, x, x ^ s] = 1 - delta
            w[s, x, 1 - (x ^ s)] = delta
    return w


class _ObjectiveMaps:
    """Linear maps from the flattened state p(u,x|s) (16 cells) to the
    marginals needed by the objective; entropies then cost one matmul."""

    def __init__(self, inst: GPInstance):
        ps = np.array([1 - inst.eps, inst.eps])
        w = _channel_tensor(inst.delta)
        my = np.zeros((16, 2))
        muy = np.zeros((16, 8))
        mus = np.zeros((16, 8))
        for s in range(2):
            for u in range(4):
                for x in range(2):
                    idx = s * 8 + u * 2 + x
                    for y in range(2):
                        my[idx, y] += ps[s] * w[s, x, y]
                        muy[idx, u * 2 + y] += ps[s] * w[s, x, y]
                    mus[idx, u * 2 + s] += ps[s]
        self.marg = np.concatenate([my, muy, mus], axis=1)  # (16, 18)
        self.h_s = binary_entropy(inst.eps)
        self.cost = np.concatenate([(1 - inst.eps) * _XBIT, inst.eps * _XBIT])

    def objective(self, p: np.ndarray) -> np.ndarray:
        flat = p.reshape(p.shape[:-2] + (16,))
        m = flat @ self.marg  # (..., 18)
        t = np.where(m > 0, m * np.log2(np.where(m > 0, m, 1.0)), 0.0)
        h_y = -t[..., :2].sum(axis=-1)
        h_uy = -t[..., 2:10].sum(axis=-1)
        h_us = -t[..., 10:].sum(axis=-1)
        return h_y - h_uy + h_us - self.h_s

    def budget(self, p: np.ndarray) -> np.ndarray:
        flat = p.reshape(p.shape[:-2] + (16,))
        return flat @ self.cost


def _batch_objective(p: np.ndarray, inst: GPInstance) -> np.ndarray:
    """Objective for states shaped (..., 2, 8); returns shape (...)."""
    return _ObjectiveMaps(inst).objective(p)


def _batch_cost(p: np.ndarray, inst: GPInstance) -> np.ndarray:
    return _ObjectiveMaps(inst).budget(p)


def _ascend(
    p: np.ndarray,
    mask: np.ndarray,
    inst: GPInstance,
    max_iters: int,
    tol: float,
    halvings: int = 11,
) -> tuple[np.ndarray, np.ndarray]:
    """Mass-exchange coordinate ascent with step-halving line search.

    ``p``: (B, 2, 8) batch of states; ``mask``: (B, 2, 8) allowed cells.
    Returns the improved batch and a per-batch convergence flag.
    """
    maps = _ObjectiveMaps(inst)
    b = p.shape[0]
    ps = np.array([1 - inst.eps, inst.eps])
    factors = 0.5 ** np.arange(halvings)
    improved_last = np.full(b, np.inf)
    arange_b = np.arange(b)
    for _ in range(max_iters):
        base = maps.objective(p)
        sweep_gain = np.zeros(b)
        for s in range(2):
            for i in range(8):
                for j in range(8):
                    if i == j:
                        continue
                    avail = p[:, s, i] * mask[:, s, j]
                    if not (avail > 1e-15).any():
                        continue
                    dcost = ps[s] * (_XBIT[j] - _XBIT[i])
                    tmax = avail.copy()
                    if dcost > 0:
                        room = (inst.tau - maps.budget(p)) / dcost
                        tmax = np.minimum(tmax, np.maximum(room, 0.0))
                    if not (tmax > 1e-15).any():
                        continue
                    steps = tmax[:, None] * factors[None, :]  # (B, H)
                    cand = np.repeat(p[:, None], halvings, axis=1)  # (B,H,2,8)
                    cand[:, :, s, i] -= steps
                    cand[:, :, s, j] += steps
                    vals = maps.objective(cand)  # (B, H)
                    best = np.argmax(vals, axis=1)
                    bvals = vals[arange_b, best]
                    gain = bvals - base
                    take = gain > 0
                    if take.any():
                        p[take] = cand[take, best[take]]
                        base = np.where(take, bvals, base)
                        sweep_gain = np.where(take, sweep_gain + gain, sweep_gain)
        improved_last = sweep_gain
        if (sweep_gain < tol).all():
            break
    return p, improved_last < tol


def _canonical_fmaps() -> list[int]:
    """Orbit representatives of the 256 maps f(u, s) under relabeling U."""
    import itertools

    reps = set()
    perms = list(itertools.permutations(range(4)))
    for z in range(256):
        best = None
        for perm in perms:
            out = 0
            for s in range(2):
                for u in range(4):
                    bit = (z >> (s * 4 + u)) & 1
                    out |= bit << (s * 4 + perm[u])
            if best is None or out < best:
                best = out
        reps.add(best)
    return sorted(reps)


def _independent_start(inst: GPInstance) -> np.ndarray:
    """U = X independent of S with P(X=1) = tau: the analytic floor."""
    p = np.zeros((2, 8))
    for s in range(2):
        p[s, 0 * 2 + 0] = 1 - inst.tau  # u=0, x=0
        p[s, 1 * 2 + 1] = inst.tau  # u=1, x=1
    return p


def _repair_cost(p: np.ndarray, inst: GPInstance) -> np.ndarray:
    """Blend toward the x=0 collapse until the budget holds."""
    cost = _batch_cost(p, inst)
    over = cost > inst.tau
    if not np.any(over):
        return p
    collapsed = p.copy()
    collapsed[..., 1::2] = 0.0
    moved = p[..., 1::2]
    collapsed[..., 0::2] += moved
    lam = np.where(cost > 0, 0.999 * inst.tau / np.where(cost > 0, cost, 1.0), 1.0)
    lam = np.clip(lam, 0.0, 1.0)[..., None, None]
    out = np.where(over[..., None, None], lam * p + (1 - lam) * collapsed, p)
    return out


def _state_to_distribution(p: np.ndarray, inst: GPInstance) -> GPDistribution:
    """(2, 8) conditional state to the joint over (U, S, X, Y)."""
    ps = np.array([1 - inst.eps, inst.eps])
    q = p.reshape(2, 4, 2)  # (s, u, x)
    pusx = np.einsum("s,sux->usx", ps, q)
    w = _channel_tensor(inst.delta)
    pusxy = np.einsum("usx,sxy->usxy", pusx, w)
    total = pusxy.sum()
    if abs(total - 1.0) > 1e-9:
        raise SchemaError(f"state does not normalise: {total!r}")
    pusxy = pusxy / total
    joint = LabeledJointPmf(
        (Axis("U", 4), Axis("S", 2), Axis("X", 2), Axis("Y", 2)), pusxy
    )
    return GPDistribution(inst, joint)


def _boundary_distribution(inst: GPInstance) -> GPDistribution:
    p = _independent_start(inst)
    return _state_to_distribution(p, inst)


def alpha_T(inst: GPInstance, config: OptimizerConfig | None = None) -> GPResult:
    """Best found value of I(U;Y) - I(U;S), with the achieving distribution.

    At eps in {0, 1} the state is deterministic and the closed form
    h(tau*delta) - h(delta) is returned with the independent witness.
    Otherwise: an exhaustive sweep over the 256 deterministic maps
    X = f(U,S) with inner ascent over p(U|S), then multi-start coordinate
    ascent over the full conditional p(U,X|S), all seeded.
    """
    config = config or OptimizerConfig()
    if inst.eps in (0.0, 1.0):
        value = alpha_TR(inst)
        return GPResult(value, _boundary_distribution(inst), True)

    rng = np.random.default_rng(config.seed)

    # deterministic-map sweep, deduplicated by relabeling of the auxiliary
    # alphabet (the objective is invariant under permuting U): 35 orbits
    fmaps = _canonical_fmaps()
    nf = len(fmaps)
    mask_f = np.zeros((nf, 2, 8))
    for k, z in enumerate(fmaps):
        for s in range(2):
            for u in range(4):
                x = (z >> (s * 4 + u)) & 1
                mask_f[k, s, u * 2 + x] = 1.0
    starts = []
    for _ in range(3):
        raw = rng.gamma(1.0, size=(nf, 2, 4))
        raw = raw / raw.sum(axis=2, keepdims=True)
        st = mask_f * np.repeat(raw, 2, axis=2)
        starts.append(_repair_cost(st, inst))
    fstates = np.concatenate(starts, axis=0)
    fmask = np.concatenate([mask_f] * 3, axis=0)
    fstates, fconv = _ascend(fstates, fmask, inst, config.max_iters, config.tol)
    fvals = _batch_objective(fstates, inst)

    # free multi-start ascent over the whole conditional
    b = max(config.restarts, 1)
    free = rng.gamma(0.7, size=(b, 2, 8))
    free = free / free.sum(axis=2, keepdims=True)
    free[0] = _independent_start(inst)
    k = np.argmax(fvals)
    free[1 % b] = fstates[k]
    free = _repair_cost(free, inst)
    free_mask = np.ones_like(free)
    free, conv = _ascend(free, free_mask, inst, config.max_iters, config.tol)
    vals = _batch_objective(free, inst)

    all_states = np.concatenate([fstates, free], axis=0)
    all_vals = np.concatenate([fvals, vals])
    all_conv = np.concatenate([fconv, conv])
    floor = binary_entropy(
        binary_convolution(inst.tau, binary_convolution(inst.eps, inst.delta))
    ) - binary_entropy(binary_convolution(inst.eps, inst.delta))
    best = int(np.argmax(all_vals))
    value = float(all_vals[best])
    witness = _state_to_distribution(all_states[best], inst)
    if value < floor - 1e-12:
        # never report below the analytic independent-input floor
        witness = _boundary_distribution(inst)
        value = witness.objective()
    return GPResult(value, witness, bool(all_conv[best]))


def rate_loss_gap(inst: GPInstance, config: OptimizerConfig | None = None) -> GapResult:
    """alpha_TR - alpha_T for the instance, with the convergence flag."""
    res = alpha_T(inst, config)
    tr = alpha_TR(inst)
    return GapResult(tr - res.value, res.value, tr, res.converged)


# ---------------------------------------------------------------------------
# no-rate-loss condition flags
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NoRateLossFlags:
    independent_capacity_marginal: bool
    state_aux_chain: bool  # I(S;U|Y) <= tol
    input_channel_chain: bool  # I(X;Y|U,S) <= tol
    input_determined: bool  # H(X|U,S) <= tol

    @property
    def all_hold(self) -> bool:
        return (
            self.independent_capacity_marginal
            and self.state_aux_chain
            and self.input_channel_chain
            and self.input_determined
        )


def no_rate_loss_report(p: GPDistribution, tol: float = 1e-9) -> NoRateLossFlags:
    """The four conditions that together characterise zero rate loss."""
    j = p.joint
    inst = p.instance
    i_sx = j.entropy(["S"]) + j.entropy(["X"]) - j.entropy(["S", "X"])
    x1 = float(j.probs.sum(axis=(0, 1, 3))[1])
    flag1 = i_sx <= tol and abs(x1 - inst.tau) <= tol
    i_su_y = (
        j.entropy(["S", "Y"]) + j.entropy(["U", "Y"]) - j.entropy(["U", "S", "Y"]) - j.entropy(["Y"])
    )
    i_xy_us = (
        j.entropy(["X", "U", "S"])
        + j.entropy(["Y", "U", "S"])
        - j.entropy(["X", "Y", "U", "S"])
        - j.entropy(["U", "S"])
    )
    h_x_us = j.entropy(["X", "U", "S"]) - j.entropy(["U", "S"])
    return NoRateLossFlags(
        independent_capacity_marginal=bool(flag1),
        state_aux_chain=bool(i_su_y <= tol),
        input_channel_chain=bool(i_xy_us <= tol),
        input_determined=bool(h_x_us <= tol),
    )


# ---------------------------------------------------------------------------
# the impossibility certificate
# ---------------------------------------------------------------------------

_BETA_VARS = tuple(f"b{i}" for i in range(4)) + tuple(f"g{i}" for i in range(4))


@dataclass(frozen=True)
class Prop1Case:
    z_bits: str
    m: int
    l: int
    overlap: int
    case_label: str
    violated_identity: str
    stage_a_feasible: bool
    feasible: bool


@dataclass(frozen=True)
class Prop1Certificate:
    instance: GPInstance
    cases: tuple[Prop1Case, ...]

    @property
    def all_infeasible(self) -> bool:
        return all(not c.feasible for c in self.cases)

    def to_csv(self) -> str:
        lines = ["z_bits,case_label,violated_identity"]
        for c in self.cases:
            lines.append(f"{c.z_bits},{c.case_label},{c.violated_identity}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Prop1Counterexample:
    instance: GPInstance
    z_bits: str
    distribution: GPDistribution


def _psi_constants(inst: GPInstance) -> tuple[Fraction, Fraction, Fraction]:
    tau, delta, eps = Fraction(inst.tau), Fraction(inst.delta), Fraction(inst.eps)
    theta = delta * (1 - tau) + (1 - delta) * tau
    psi1 = (1 - tau) * (1 - delta) / (1 - theta)
    psi2 = (1 - tau) * delta / theta
    return theta, psi1, psi2


def _row(terms: Mapping[str, Fraction], rel: str, const: Fraction) -> LinearConstraint:
    coeffs = tuple(terms.get(v, Fraction(0)) for v in _BETA_VARS)
    return LinearConstraint(coeffs, rel, const)


def _stage_systems(inst: GPInstance, z: Sequence[int]):
    """Exact-rational systems: stage A (simplex + marginal identities),
    stage B (plus the per-symbol channel-consistency equations)."""
    theta, psi1, psi2 = _psi_constants(inst)
    delta = Fraction(inst.delta)
    one = Fraction(1)
    rows_a = [
        _row({f"b{i}": one for i in range(4)}, "==", one),
        _row({f"g{i}": one for i in range(4)}, "==", one),
        _row({f"b{i}": one for i in range(4) if z[i]}, "==", psi1),
        _row({f"g{i}": one for i in range(4) if z[4 + i]}, "==", psi1),
        _row({f"g{i}": one for i in range(4) if z[i]}, "==", psi2),
        _row({f"b{i}": one for i in range(4) if z[4 + i]}, "==", psi2),
    ]
    rows_b = list(rows_a)
    for u in range(4):
        c0 = (1 - delta) if z[u] else delta
        rows_b.append(
            _row(
                {f"b{u}": (1 - theta) * (1 - c0), f"g{u}": -c0 * theta},
                "==",
                Fraction(0),
            )
        )
        c1 = delta if z[4 + u] else (1 - delta)
        rows_b.append(
            _row(
                {f"b{u}": theta * (1 - c1), f"g{u}": -c1 * (1 - theta)},
                "==",
                Fraction(0),
            )
        )
    nonneg = frozenset(_BETA_VARS)
    return (
        RateSystem(_BETA_VARS, tuple(rows_a), nonneg),
        RateSystem(_BETA_VARS, tuple(rows_b), nonneg),
    )


def _classify(z: Sequence[int]) -> tuple[str, str]:
    """Case label and violated identity from (m, l, overlap).

    Labels follow the printed case split; the m = l = 1 class reuses the
    printed "Case 6" header.
    """
    m = sum(z[:4])
    l = sum(z[4:])
    j = sum(1 for i in range(4) if z[i] and z[4 + i])
    if m == 0 or l == 0:
        return "case1", "psi1_neq_psi2"
    if m == 4 or l == 4:
        return "case2", "psi1_neq_psi2"
    hi, lo = max(m, l), min(m, l)
    if (hi, lo) == (3, 3):
        return "case3", ("psi1_neq_psi2" if j == 3 else "markov_chain")
    if (hi, lo) == (3, 2):
        return "case4", ("psi1_neq_psi2" if j == 2 else "markov_chain")
    if (hi, lo) == (3, 1):
        return "case5", ("psi1_neq_psi2" if j == 1 else "psi1_plus_psi2_gt_1")
    if (hi, lo) == (2, 2):
        return "case6", {2: "psi1_neq_psi2", 1: "markov_chain", 0: "psi1_plus_psi2_gt_1"}[j]
    if (hi, lo) == (2, 1):
        return "case7", ("psi1_neq_psi2" if j == 1 else "psi1_plus_psi2_gt_1")
    return "case6", ("psi1_neq_psi2" if j == 1 else "psi1_plus_psi2_gt_1")


def _witness_distribution(
    inst: GPInstance, z: Sequence[int], values: Mapping[str, float]
) -> GPDistribution:
    theta = inst.theta
    eps = inst.eps
    beta = [float(values[f"b{i}"]) for i in range(4)]
    gamma = [float(values[f"g{i}"]) for i in range(4)]
    p = np.zeros((4, 2, 2, 2))  # (u, s, x, y)
    p_sy = {
        (0, 0): (1 - eps) * (1 - theta),
        (0, 1): (1 - eps) * theta,
        (1, 0): eps * theta,
        (1, 1): eps * (1 - theta),
    }
    for u in range(4):
        for s in range(2):
            x = 0 if z[4 * s + u] else 1
            for y in range(2):
                w = beta[u] if y == 0 else gamma[u]
                p[u, s, x, y] = p_sy[(s, y)] * w
    total = p.sum()
    if total <= 0:
        raise SchemaError("degenerate witness")
    joint = LabeledJointPmf(
        (Axis("U", 4), Axis("S", 2), Axis("X", 2), Axis("Y", 2)), p / total
    )
    return GPDistribution(inst, joint)


def prop1_refute(inst: GPInstance, tol: float = 1e-9):
    """Exhaustive exact refutation over all 256 deterministic maps.

    Returns a ``Prop1Certificate`` when every assignment is infeasible;
    if any assignment admits a joint distribution (which would contradict
    the impossibility statement) the witness is surfaced as a
    ``Prop1Counterexample`` instead.
    """
    if not 0.0 < inst.eps < 1.0:
        raise PreconditionError(
            f"the impossibility statement requires eps strictly inside (0,1); "
            f"got {inst.eps}; at the boundary use prop1_boundary_witness"
        )
    cases = []
    for zbits in range(256):
        z = [(zbits >> k) & 1 for k in range(8)]
        label, violated = _classify(z)
        sys_a, sys_b = _stage_systems(inst, z)
        ok_a, _ = feasible_with_witness(sys_a, tol=0.0, want_witness=False)
        ok_b, wit = feasible_with_witness(sys_b, tol=0.0, want_witness=True)
        if ok_b and wit is not None:
            return Prop1Counterexample(
                inst, "".join(map(str, z)), _witness_distribution(inst, z, wit)
            )
        cases.append(
            Prop1Case(
                z_bits="".join(map(str, z)),
                m=sum(z[:4]),
                l=sum(z[4:]),
                overlap=sum(1 for i in range(4) if z[i] and z[4 + i]),
                case_label=label,
                violated_identity=violated,
                stage_a_feasible=bool(ok_a),
                feasible=bool(ok_b),
            )
        )
    return Prop1Certificate(inst, tuple(cases))


def prop1_boundary_witness(inst: GPInstance) -> GPDistribution:
    """With deterministic state the guard does not apply: search the
    relaxed systems (only the realised state value constrains anything)
    and return a distribution meeting all four conditions."""
    if inst.eps not in (0.0, 1.0):
        raise PreconditionError(
            f"boundary search needs eps in {{0, 1}}, got {inst.eps}"
        )
    theta, psi1, psi2 = _psi_constants(inst)
    delta = Fraction(inst.delta)
    one = Fraction(1)
    s_real = 0 if inst.eps == 0.0 else 1
    for zbits in range(256):
        z = [(zbits >> k) & 1 for k in range(8)]
        rows = [
            _row({f"b{i}": one for i in range(4)}, "==", one),
            _row({f"g{i}": one for i in range(4)}, "==", one),
        ]
        if s_real == 0:
            rows.append(_row({f"b{i}": one for i in range(4) if z[i]}, "==", psi1))
            rows.append(_row({f"g{i}": one for i in range(4) if z[i]}, "==", psi2))
        else:
            rows.append(_row({f"g{i}": one for i in range(4) if z[4 + i]}, "==", psi1))
            rows.append(_row({f"b{i}": one for i in range(4) if z[4 + i]}, "==", psi2))
        for u in range(4):
            if s_real == 0:
                c0 = (1 - delta) if z[u] else delta
                rows.append(
                    _row(
                        {f"b{u}": (1 - theta) * (1 - c0), f"g{u}": -c0 * theta},
                        "==",
                        Fraction(0),
                    )
                )
            else:
                c1 = delta if z[4 + u] else (1 - delta)
                rows.append(
                    _row(
                        {f"b{u}": theta * (1 - c1), f"g{u}": -c1 * (1 - theta)},
                        "==",
                        Fraction(0),
                    )
                )
        system = RateSystem(_BETA_VARS, tuple(rows), frozenset(_BETA_VARS))
        ok, wit = feasible_with_witness(system, tol=0.0, want_witness=True)
        if ok and wit is not None:
            return _witness_distribution(inst, z, wit)
    raise SchemaError("no boundary witness found; this should be unreachable")
