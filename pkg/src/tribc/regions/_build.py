"""Shared helpers for assembling rate systems from entropic constants."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from ..entropy import InfoExpr, LabeledJointPmf, info_quantity
from ..polytope import LinearConstraint, RateSystem

__all__ = ["cond_H", "mi", "multi_mi", "row", "build_system"]


def cond_H(pmf: LabeledJointPmf, targets: Sequence[str], given: Sequence[str] = ()) -> float:
    """H(targets | given); zero for an empty target group."""
    targets, given = tuple(targets), tuple(given)
    if not targets:
        return 0.0
    if not given:
        return info_quantity(pmf, InfoExpr("entropy", (targets,)))
    return info_quantity(pmf, InfoExpr("conditional_entropy", (targets,), given))


def mi(
    pmf: LabeledJointPmf,
    a: Sequence[str],
    b: Sequence[str],
    given: Sequence[str] = (),
) -> float:
    a, b, given = tuple(a), tuple(b), tuple(given)
    if not given:
        return info_quantity(pmf, InfoExpr("mutual_info", (a, b)))
    return info_quantity(pmf, InfoExpr("conditional_mutual_info", (a, b), given))


def multi_mi(
    pmf: LabeledJointPmf,
    a: Sequence[str],
    b: Sequence[str],
    c: Sequence[str],
    given: Sequence[str] = (),
) -> float:
    return info_quantity(
        pmf, InfoExpr("multi_info", (tuple(a), tuple(b), tuple(c)), tuple(given))
    )


def row(
    variables: Sequence[str], terms: Mapping[str, int], relation: str, constant: float
) -> LinearConstraint:
    """A constraint with small integer coefficients given as {name: coeff}."""
    coeffs = tuple(Fraction(terms.get(v, 0)) for v in variables)
    return LinearConstraint(coeffs, relation, float(constant))


def build_system(
    variables: Sequence[str],
    rows: Sequence[LinearConstraint],
    nonneg: Sequence[str],
) -> RateSystem:
    return RateSystem(tuple(variables), tuple(rows), frozenset(nonneg))
