"""Closed-form corner point, the suboptimality inequality, and the window.

For the three-BSC example channel with the costed first bit:

* the linear-coding corner point (h(t*d1) - h(d1), 1 - h(d2), 1 - h(d3)) is
  achievable whenever t*d1 <= min(d2, d3);
* when h(d2) + h(d3) < 1 + h(d1*t) that corner is outside the region
  reachable by layered random-coding with unstructured codebooks;
* with d2 = d3 = d the two conditions hold simultaneously exactly for
  h(t*d1) <= h(d) < (1 + h(d1*t))/2, giving a window of d values.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..entropy import binary_convolution, binary_entropy, binary_entropy_inverse
from ..errors import DomainError, PreconditionError

__all__ = [
    "lemma1_point",
    "theorem2_holds",
    "corollary1_window",
    "Corollary1Report",
    "corollary1_report",
    "PUBLISHED_WINDOW_HIGH",
]

# endpoint quoted in the original statement of the window; the bisection
# solution of h(d) = (1 + h(d1*t))/2 lands higher, so both are reported
PUBLISHED_WINDOW_HIGH = 0.21


def _check_open(name: str, v: float, lo: float, hi: float) -> None:
    if not lo < v < hi:
        raise DomainError(f"{name} must lie strictly inside ({lo}, {hi}), got {v}")


def lemma1_point(
    tau: float, delta1: float, delta2: float, delta3: float
) -> tuple[float, float, float]:
    """The corner rate triple achieved by nested linear codes.

    Requires t*d1 <= min(d2, d3) (boundary included) so receiver 1 can
    decode the mod-2 sum of the other users' codewords before its own.
    """
    _check_open("tau", tau, 0.0, 0.5)
    for nm, v in (("delta1", delta1), ("delta2", delta2), ("delta3", delta3)):
        _check_open(nm, v, 0.0, 0.5)
    t = binary_convolution(tau, delta1)
    if t > min(delta2, delta3):
        raise PreconditionError(
            f"sum-decoding hypothesis violated: tau*delta1 = {t!r} exceeds "
            f"min(delta2, delta3) = {min(delta2, delta3)!r}"
        )
    return (
        binary_entropy(t) - binary_entropy(delta1),
        1.0 - binary_entropy(delta2),
        1.0 - binary_entropy(delta3),
    )


def theorem2_holds(tau: float, delta1: float, delta2: float, delta3: float) -> bool:
    """True iff h(d2) + h(d3) < 1 + h(d1*t) strictly.

    Under this condition the corner triple is not reachable by the layered
    unstructured-coding region for any test channel.
    """
    _check_open("tau", tau, 0.0, 0.5)
    for nm, v in (("delta1", delta1), ("delta2", delta2), ("delta3", delta3)):
        _check_open(nm, v, 0.0, 0.5)
    lhs = binary_entropy(delta2) + binary_entropy(delta3)
    rhs = 1.0 + binary_entropy(binary_convolution(delta1, tau))
    return lhs < rhs


def corollary1_window(delta1: float, tau: float) -> tuple[float, float]:
    """The interval of d = d2 = d3 where the corner separates the regions.

    low = tau*delta1 exactly; high solves h(d) = (1 + h(d1*tau))/2 by
    bisection.  Strict suboptimality holds for d in [low, high).
    """
    _check_open("delta1", delta1, 0.0, 0.5)
    _check_open("tau", tau, 0.0, 0.5)
    low = binary_convolution(tau, delta1)
    high = binary_entropy_inverse((1.0 + binary_entropy(low)) / 2.0)
    return low, high


@dataclass(frozen=True)
class Corollary1Report:
    delta1: float
    tau: float
    low: float
    high_derived: float
    published_high: float
    published_window_contained: bool
    note: str


def corollary1_report(delta1: float, tau: float) -> Corollary1Report:
    """Window endpoints plus the comparison against the published figure."""
    low, high = corollary1_window(delta1, tau)
    contained = low <= PUBLISHED_WINDOW_HIGH <= high
    note = (
        f"derived window ({low:.6g}, {high:.6g}); originally published as "
        f"({low:.6g}, {PUBLISHED_WINDOW_HIGH:.6g}) - the derived window "
        "contains the published one"
        if contained
        else f"derived window ({low:.6g}, {high:.6g}) does not contain the "
        f"published endpoint {PUBLISHED_WINDOW_HIGH:.6g}"
    )
    return Corollary1Report(
        delta1=delta1,
        tau=tau,
        low=low,
        high_derived=high,
        published_high=PUBLISHED_WINDOW_HIGH,
        published_window_contained=contained,
        note=note,
    )
