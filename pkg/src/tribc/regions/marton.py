"""Two-user superposition-plus-binning region, per-test-channel membership.

Test channels carry axes Q (time sharing), W (public), V1, V2 (private)
and X.  Two-user channels are modelled as three-output channels whose
third output alphabet is degenerate (size 1).
"""

from __future__ import annotations

from ..errors import SchemaError
from ._build import mi
from .testchannel import TestChannel

__all__ = ["marton2_region_check"]

_AXES = ("Q", "W", "V1", "V2", "X")


def marton2_region_check(
    test: TestChannel, pair: tuple[float, float], tol: float = 1e-7
) -> bool:
    """True iff (R1, R2) satisfies the per-user and sum bounds.

    R_k <= I(W V_k; Y_k | Q) for k = 1, 2 and
    R1 + R2 <= min(I(W;Y1|Q), I(W;Y2|Q)) + I(V1;Y1|QW) + I(V2;Y2|QW)
               - I(V1;V2|QW).
    """
    missing = [a for a in _AXES if a not in test.joint.axis_names]
    if missing:
        raise SchemaError(f"two-user test channel lacks axes {missing}")
    if test.channel.output_sizes[2] != 1:
        raise SchemaError(
            "two-user membership needs a degenerate third output (size 1), "
            f"got {test.channel.output_sizes[2]}"
        )
    r1, r2 = float(pair[0]), float(pair[1])
    p = test.composed()
    if r1 < -tol or r2 < -tol:
        return False
    if r1 > mi(p, ("W", "V1"), ("Y1",), ("Q",)) + tol:
        return False
    if r2 > mi(p, ("W", "V2"), ("Y2",), ("Q",)) + tol:
        return False
    common = min(mi(p, ("W",), ("Y1",), ("Q",)), mi(p, ("W",), ("Y2",), ("Q",)))
    sum_bound = (
        common
        + mi(p, ("V1",), ("Y1",), ("Q", "W"))
        + mi(p, ("V2",), ("Y2",), ("Q", "W"))
        - mi(p, ("V1",), ("V2",), ("Q", "W"))
    )
    return r1 + r2 <= sum_bound + tol
