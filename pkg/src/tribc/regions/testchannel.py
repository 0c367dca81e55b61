"""Test channels: auxiliary joint pmfs attached to a broadcast channel.

A test channel is a joint distribution over auxiliary axes plus the input
axis ``X``, together with the channel it feeds, a map of finite-field sizes
for the coset-coded axes, and the cost budget tau.  Every rate region in
this package is parameterised by one of these.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from ..channels import BroadcastChannel
from ..entropy import Axis, LabeledJointPmf
from ..errors import SchemaError

__all__ = ["TestChannel"]

_COST_TOL = 1e-9
_OUTPUT_AXES = ("Y1", "Y2", "Y3")


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class TestChannel:
    """joint p(aux..., X) + channel W(y|x) + field sizes + cost budget."""

    joint: LabeledJointPmf
    channel: BroadcastChannel
    field_sizes: Mapping[str, int]
    tau: float
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "field_sizes", dict(self.field_sizes))
        if "X" not in self.joint.axis_names:
            raise SchemaError("test channel joint must contain an 'X' axis")
        if self.joint.axis_size("X") != self.channel.input_size:
            raise SchemaError(
                "joint X axis size "
                f"{self.joint.axis_size('X')} != channel input size "
                f"{self.channel.input_size}"
            )
        for name in _OUTPUT_AXES:
            if name in self.joint.axis_names:
                raise SchemaError(f"axis {name!r} is reserved for channel outputs")
        for name, q in self.field_sizes.items():
            if name not in self.joint.axis_names:
                raise SchemaError(f"field size given for unknown axis {name!r}")
            if self.joint.axis_size(name) != q:
                raise SchemaError(
                    f"axis {name!r} has size {self.joint.axis_size(name)}, "
                    f"declared field size {q}"
                )
        expected = self.joint.expectation("X", self.channel.cost)
        if expected > self.tau + _COST_TOL:
            raise SchemaError(
                f"expected cost {expected!r} exceeds the budget tau={self.tau!r}"
            )

    @property
    def expected_cost(self) -> float:
        return self.joint.expectation("X", self.channel.cost)

    def composed(self) -> LabeledJointPmf:
        """The joint extended with the channel outputs Y1, Y2, Y3."""
        if "composed" not in self._cache:
            j = self.joint
            x_pos = j.axis_index("X")
            probs = np.moveaxis(j.probs, x_pos, -1)  # (..., X)
            w = self.channel.transition  # (X, y1, y2, y3)
            full = probs[..., None, None, None] * w
            # restore X to its original position among the auxiliary axes
            full = np.moveaxis(full, -4, x_pos)
            axes = tuple(j.axes) + tuple(
                Axis(n, s) for n, s in zip(_OUTPUT_AXES, self.channel.output_sizes)
            )
            self._cache["composed"] = LabeledJointPmf(axes, full)
        return self._cache["composed"]

    def composed_with_sum(self, left: str, right: str, name: str) -> LabeledJointPmf:
        """Composed pmf with a derived axis ``name = left + right mod q``.

        ``left`` and ``right`` must be coset axes over the same prime field.
        """
        key = ("sum", left, right, name)
        if key not in self._cache:
            qa = self.field_sizes.get(left)
            qb = self.field_sizes.get(right)
            if qa is None or qb is None:
                raise SchemaError(
                    f"axes {left!r}, {right!r} need declared field sizes"
                )
            if qa != qb:
                raise SchemaError(
                    f"mismatched field sizes for {left!r} ({qa}) and {right!r} ({qb})"
                )
            if qa != 1 and not _is_prime(qa):
                raise SchemaError(
                    f"field size {qa} is not prime; prime fields only"
                )
            self._cache[key] = self.composed().with_derived_axis(
                name, qa, [left, right], lambda a, b: (a + b) % qa
            )
        return self._cache[key]

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "joint": self.joint.to_json_dict(),
            "channel": self.channel.to_json_dict(),
            "field_sizes": dict(self.field_sizes),
            "tau": float(self.tau),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, doc: Mapping, base_dir: str | Path | None = None) -> "TestChannel":
        try:
            chan = doc["channel"]
            if isinstance(chan, str):
                path = Path(chan)
                if base_dir is not None and not path.is_absolute():
                    path = Path(base_dir) / path
                channel = BroadcastChannel.from_json(path.read_text())
            else:
                channel = BroadcastChannel.from_json_dict(chan)
            return cls(
                joint=LabeledJointPmf.from_json_dict(doc["joint"]),
                channel=channel,
                field_sizes={str(k): int(v) for k, v in doc.get("field_sizes", {}).items()},
                tau=float(doc["tau"]),
            )
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed test-channel document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str, base_dir: str | Path | None = None) -> "TestChannel":
        return cls.from_json_dict(json.loads(text), base_dir=base_dir)
