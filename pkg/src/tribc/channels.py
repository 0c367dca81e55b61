"""Broadcast-channel model, the three-BSC product example, and sampling.

The concrete channel studied throughout: input is three bits (x1, x2, x3),
receiver 1 sees x1 xor x2 xor x3 through a BSC(delta1), receivers 2 and 3
see x2 and x3 through BSC(delta2), BSC(delta3), and only the first bit is
costed.  Input symbols are encoded as x = 4*x1 + 2*x2 + x3 so that file
artifacts are portable.

Sampling uses a counter-based generator (Philox) keyed by (seed, stream):
per-sample state is (seed, stream, counter), so parallel samplers on
distinct streams are order-independent and every draw is reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError, SchemaError

__all__ = [
    "BroadcastChannel",
    "Example1Params",
    "make_example1",
    "is_three_to_one",
    "StreamState",
    "channel_sample",
    "channel_sample_many",
]

_SLICE_TOL = 1e-12


@dataclass(frozen=True)
class BroadcastChannel:
    """(input alphabet, three output alphabets, W(y1,y2,y3|x), cost)."""

    input_size: int
    output_sizes: tuple[int, int, int]
    transition: np.ndarray  # shape (input, y1, y2, y3)
    cost: np.ndarray  # shape (input,)
    factorization: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self) -> None:
        if self.input_size < 1 or any(s < 1 for s in self.output_sizes):
            raise SchemaError("alphabet sizes must be positive")
        shape = (self.input_size,) + tuple(self.output_sizes)
        w = np.asarray(self.transition, dtype=np.float64)
        if w.size != int(np.prod(shape)):
            raise SchemaError(
                f"transition has {w.size} entries, expected {int(np.prod(shape))}"
            )
        w = w.reshape(shape)
        if np.any(w < 0):
            raise SchemaError("transition probabilities must be nonnegative")
        sums = w.reshape(self.input_size, -1).sum(axis=1)
        bad = np.abs(sums - 1.0) > _SLICE_TOL
        if bad.any():
            raise SchemaError(
                f"transition slice for x={int(np.argmax(bad))} sums to "
                f"{float(sums[np.argmax(bad)])!r}, expected 1 within 1e-12"
            )
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "transition", w)
        k = np.asarray(self.cost, dtype=np.float64)
        if k.shape != (self.input_size,):
            raise SchemaError("cost vector length must match the input alphabet")
        if np.any(~np.isfinite(k)) or np.any(k < 0):
            raise SchemaError("cost entries must be finite and nonnegative")
        k = k.copy()
        k.setflags(write=False)
        object.__setattr__(self, "cost", k)
        object.__setattr__(self, "output_sizes", tuple(int(s) for s in self.output_sizes))
        if self.factorization is not None:
            f = tuple(tuple(int(v) for v in fac) for fac in self.factorization)
            if len(f) != 3:
                raise SchemaError("factorization needs three coordinate maps")
            if any(len(fac) != self.input_size for fac in f):
                raise SchemaError("factorization maps must cover the input alphabet")
            sizes = tuple(max(fac) + 1 for fac in f)
            if int(np.prod(sizes)) != self.input_size:
                raise SchemaError(
                    f"coordinate sizes {sizes} do not factor the input alphabet"
                )
            if len({tuple(fac[x] for fac in f) for x in range(self.input_size)}) != self.input_size:
                raise SchemaError("factorization must be a bijection onto the product")
            object.__setattr__(self, "factorization", f)

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        doc = {
            "input_size": self.input_size,
            "output_sizes": list(self.output_sizes),
            "transition": [float(v) for v in self.transition.reshape(-1)],
            "cost": [float(v) for v in self.cost],
        }
        if self.factorization is not None:
            doc["factorization"] = [list(f) for f in self.factorization]
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "BroadcastChannel":
        try:
            fac = doc.get("factorization")
            return cls(
                input_size=int(doc["input_size"]),
                output_sizes=tuple(int(s) for s in doc["output_sizes"]),
                transition=np.asarray(doc["transition"], dtype=np.float64),
                cost=np.asarray(doc["cost"], dtype=np.float64),
                factorization=None if fac is None else tuple(tuple(r) for r in fac),
            )
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed channel document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "BroadcastChannel":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class Example1Params:
    """Crossovers of the three BSC legs plus the weight budget on x1."""

    delta1: float
    delta2: float
    delta3: float
    tau: float

    def __post_init__(self) -> None:
        for name in ("delta1", "delta2", "delta3", "tau"):
            v = getattr(self, name)
            if not 0.0 < v < 0.5:
                raise DomainError(f"{name} must lie strictly inside (0, 0.5), got {v}")


def _bsc(eta: float) -> np.ndarray:
    return np.array([[1 - eta, eta], [eta, 1 - eta]])


def make_example1(params: Example1Params) -> BroadcastChannel:
    """The octonary-input, binary-output product channel.

    W(y1,y2,y3 | x1x2x3) = BSC_d1(y1 | x1^x2^x3) BSC_d2(y2 | x2)
    BSC_d3(y3 | x3), cost 1 iff x1 = 1, with x = 4*x1 + 2*x2 + x3.
    """
    b1, b2, b3 = _bsc(params.delta1), _bsc(params.delta2), _bsc(params.delta3)
    w = np.zeros((8, 2, 2, 2))
    for x in range(8):
        x1, x2, x3 = (x >> 2) & 1, (x >> 1) & 1, x & 1
        s = x1 ^ x2 ^ x3
        w[x] = b1[s][:, None, None] * b2[x2][None, :, None] * b3[x3][None, None, :]
    cost = np.array([1.0 if (x >> 2) & 1 else 0.0 for x in range(8)])
    fac = (
        tuple((x >> 2) & 1 for x in range(8)),
        tuple((x >> 1) & 1 for x in range(8)),
        tuple(x & 1 for x in range(8)),
    )
    return BroadcastChannel(8, (2, 2, 2), w, cost, fac)


def is_three_to_one(
    channel: BroadcastChannel,
    factorization: Sequence[Sequence[int]] | None = None,
    tol: float = 1e-9,
) -> bool:
    """Whether receivers 2 and 3 see interference-free point-to-point legs.

    True iff the y2-marginal of W depends on x only through its second
    coordinate and the y3-marginal only through the third, entrywise
    within ``tol`` under the supplied (or stored) factorization.
    """
    fac = factorization if factorization is not None else channel.factorization
    if fac is None:
        raise SchemaError("a factorization of the input alphabet is required")
    fac = tuple(tuple(int(v) for v in f) for f in fac)
    if len(fac) != 3 or any(len(f) != channel.input_size for f in fac):
        raise SchemaError("factorization maps must cover the input alphabet")
    w = channel.transition
    # correctly-rounded marginals: exact constructions then compare bit-equal
    # even at tol=0, independent of summation order
    marg2 = np.array(
        [
            [math.fsum(w[x, :, y2, :].reshape(-1)) for y2 in range(channel.output_sizes[1])]
            for x in range(channel.input_size)
        ]
    )
    marg3 = np.array(
        [
            [math.fsum(w[x, :, :, y3].reshape(-1)) for y3 in range(channel.output_sizes[2])]
            for x in range(channel.input_size)
        ]
    )
    for marg, coord in ((marg2, fac[1]), (marg3, fac[2])):
        seen: dict[int, np.ndarray] = {}
        for x in range(channel.input_size):
            c = coord[x]
            if c not in seen:
                seen[c] = marg[x]
            elif np.max(np.abs(marg[x] - seen[c])) > tol:
                return False
    return True


# ---------------------------------------------------------------------------
# counter-based sampling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StreamState:
    """Explicit sampling state: (seed, stream, counter)."""

    seed: int
    stream: int = 0
    counter: int = 0

    def advanced(self, n: int = 1) -> "StreamState":
        return StreamState(self.seed, self.stream, self.counter + n)


def _generator(state: StreamState) -> np.random.Generator:
    key = np.array([state.seed, state.stream], dtype=np.uint64)
    counter = np.array([state.counter, 0, 0, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def channel_sample(
    channel: BroadcastChannel, x: int, state: StreamState
) -> tuple[int, int, int]:
    """Draw one (y1, y2, y3) from W(.|x); deterministic given ``state``."""
    return tuple(channel_sample_many(channel, x, state, 1)[0])


def channel_sample_many(
    channel: BroadcastChannel, x: int, state: StreamState, n: int
) -> np.ndarray:
    """Draw ``n`` output triples from W(.|x) as an (n, 3) int array.

    Consumes the counter block [counter, counter + n) of the stream.
    """
    if not 0 <= x < channel.input_size:
        raise DomainError(f"input symbol {x} outside alphabet of size {channel.input_size}")
    u = _generator(state).random(n)
    flat = channel.transition[x].reshape(-1)
    cdf = np.cumsum(flat)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, u, side="right")
    s2, s3 = channel.output_sizes[1], channel.output_sizes[2]
    y1, rem = np.divmod(idx, s2 * s3)
    y2, y3 = np.divmod(rem, s3)
    return np.stack([y1, y2, y3], axis=1)
