"""Parameterised test-channel families and randomized search drivers.

The region definitions quantify over all test channels; that union is an
infinite-dimensional object, so the toolkit works pointwise and provides
seeded generators over pmf families plus search drivers that sweep them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..channels import BroadcastChannel, Example1Params, make_example1
from ..entropy import Axis, LabeledJointPmf
from ..errors import SchemaError
from .analytic import lemma1_point, theorem2_holds
from .nem import NEM_AXES, nem_member
from .testchannel import TestChannel

__all__ = [
    "corner_test_channel",
    "corner_test_channel_nem",
    "random_test_channel",
    "CornerSearchResult",
    "nem_corner_search",
]


def corner_test_channel(params: Example1Params) -> TestChannel:
    """The single-layer corner construction on the three-BSC channel.

    U21, U31 uniform bits, V1 Bernoulli(tau), and the input is the
    deterministic assembly X = (x1, x2, x3) = (V1, U21, U31).
    """
    tau = params.tau
    probs = np.zeros((2, 2, 2, 8))
    for v1 in range(2):
        pv = tau if v1 else 1.0 - tau
        for u21 in range(2):
            for u31 in range(2):
                x = 4 * v1 + 2 * u21 + u31
                probs[u21, u31, v1, x] = pv * 0.25
    joint = LabeledJointPmf(
        (Axis("U21", 2), Axis("U31", 2), Axis("V1", 2), Axis("X", 8)), probs
    )
    return TestChannel(joint, make_example1(params), {"U21": 2, "U31": 2}, tau)


def corner_test_channel_nem(params: Example1Params) -> TestChannel:
    """The corner construction embedded in the layered-coding axis set,
    with Q, W, U23, V2, V3 degenerate (size 1)."""
    tau = params.tau
    probs = np.zeros((1, 1, 2, 1, 2, 2, 1, 1, 8))
    for v1 in range(2):
        pv = tau if v1 else 1.0 - tau
        for u12 in range(2):
            for u31 in range(2):
                x = 4 * v1 + 2 * u12 + u31
                probs[0, 0, u12, 0, u31, v1, 0, 0, x] = pv * 0.25
    axes = tuple(
        Axis(n, s)
        for n, s in zip(NEM_AXES, (1, 1, 2, 1, 2, 2, 1, 1, 8))
    )
    joint = LabeledJointPmf(axes, probs)
    return TestChannel(joint, make_example1(params), {"U12": 2, "U23": 1, "U31": 2}, tau)


def random_test_channel(
    channel: BroadcastChannel,
    tau: float,
    axis_sizes: dict[str, int],
    rng: np.random.Generator,
    field_sizes: dict[str, int] | None = None,
    concentration: float = 1.0,
) -> TestChannel:
    """A random joint over the given auxiliary axes obeying the cost budget.

    Draws Dirichlet(concentration) weights; if the drawn joint exceeds the
    budget it is mixed toward a copy whose input mass sits on a cheapest
    symbol, landing strictly inside the budget.
    """
    names = list(axis_sizes) + ["X"]
    sizes = [axis_sizes[n] for n in axis_sizes] + [channel.input_size]
    w = rng.gamma(concentration, size=tuple(sizes))
    w = w / w.sum()
    cost = float(np.tensordot(w.sum(axis=tuple(range(len(sizes) - 1))), channel.cost, 1))
    kmin = float(channel.cost.min())
    if cost > tau:
        if tau <= kmin:
            raise SchemaError(
                f"budget tau={tau} unreachable: cheapest symbol costs {kmin}"
            )
        cheap = int(np.argmin(channel.cost))
        collapsed = np.zeros_like(w)
        collapsed[..., cheap] = w.sum(axis=-1)
        lam = 0.999 * (tau - kmin) / (cost - kmin)
        w = lam * w + (1.0 - lam) * collapsed
        w = w / w.sum()
    axes = tuple(Axis(n, s) for n, s in zip(names, sizes))
    joint = LabeledJointPmf(axes, w)
    return TestChannel(joint, channel, dict(field_sizes or {}), tau)


@dataclass(frozen=True)
class CornerSearchResult:
    params: Example1Params
    point: tuple[float, float, float]
    separation_condition: bool
    channels_tested: int
    members: tuple[int, ...]  # indices of test channels containing the point
    seed: int

    @property
    def all_excluded(self) -> bool:
        return not self.members


def nem_corner_search(
    params: Example1Params,
    count: int = 100,
    seed: int = 0,
    max_aux: int = 2,
    tol: float = 1e-7,
) -> CornerSearchResult:
    """Test the corner triple against a seeded family of random layered
    test channels.

    Evidence, not proof: the separation statement quantifies over all test
    channels, this sweeps ``count`` random ones with auxiliary alphabets
    of size at most ``max_aux``.
    """
    point = lemma1_point(params.tau, params.delta1, params.delta2, params.delta3)
    condition = theorem2_holds(params.tau, params.delta1, params.delta2, params.delta3)
    channel = make_example1(params)
    members = []
    rng = np.random.default_rng(seed)
    for idx in range(count):
        sizes = {
            name: int(rng.integers(1, max_aux + 1)) for name in NEM_AXES if name != "X"
        }
        # keep the load-bearing axes non-degenerate more often than not
        for name in ("U12", "U31", "V1"):
            if rng.random() < 0.75:
                sizes[name] = max_aux
        conc = float(rng.choice((0.4, 1.0, 3.0)))
        test = random_test_channel(
            channel, params.tau, sizes, rng, concentration=conc
        )
        if nem_member(test, point, tol=tol):
            members.append(idx)
    return CornerSearchResult(
        params=params,
        point=point,
        separation_condition=condition,
        channels_tested=count,
        members=tuple(members),
        seed=seed,
    )
