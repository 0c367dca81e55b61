"""Shared constructors for region tests."""

from __future__ import annotations

import numpy as np

from tribc.channels import BroadcastChannel
from tribc.entropy import Axis, LabeledJointPmf
from tribc.regions.testchannel import TestChannel


def two_user_bsc_channel(d1: float, d2: float) -> BroadcastChannel:
    """Binary-input two-user channel; third output degenerate."""
    w = np.zeros((2, 2, 2, 1))
    for x in range(2):
        for y1 in range(2):
            for y2 in range(2):
                p1 = 1 - d1 if y1 == x else d1
                p2 = 1 - d2 if y2 == x else d2
                w[x, y1, y2, 0] = p1 * p2
    return BroadcastChannel(2, (2, 2, 1), w, np.zeros(2))


def product_joint(axes: list[tuple[str, int]], marginals, x_map) -> LabeledJointPmf:
    """Independent auxiliary marginals with X a deterministic map of them.

    ``marginals``: list of probability vectors, one per non-X axis.
    ``x_map``: function from auxiliary indices to the X symbol.
    """
    aux = [(n, s) for n, s in axes if n != "X"]
    x_size = dict(axes)["X"]
    shape = tuple(s for _, s in aux) + (x_size,)
    probs = np.zeros(shape)
    grids = np.indices(tuple(s for _, s in aux))
    flatiter = np.ndindex(*[s for _, s in aux])
    for idx in flatiter:
        p = 1.0
        for k, (_, s) in enumerate(aux):
            p *= marginals[k][idx[k]]
        probs[idx + (x_map(*idx),)] = p
    names = [n for n, _ in aux] + ["X"]
    sizes = [s for _, s in aux] + [x_size]
    return LabeledJointPmf(tuple(Axis(n, s) for n, s in zip(names, sizes)), probs)


def random_conditional_joint(rng, axes, channel, tau, concentration=1.0):
    """Random dependent joint over axes + X respecting the cost budget."""
    from tribc.regions.families import random_test_channel

    sizes = {n: s for n, s in axes if n != "X"}
    return random_test_channel(channel, tau, sizes, rng, concentration=concentration)
