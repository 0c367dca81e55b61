"""Exact linear-inequality systems: Fourier-Motzkin projection and feasibility.

Coefficients are exact rationals (every system built from the rate bounds
uses small integers), so all numerical error is confined to the constant
terms, which carry the entropic constants.  Feasibility of a variable-free
inequality is decided with an explicit tolerance.

Equalities are handled by rewriting into opposing inequality pairs for
single-variable elimination; ``feasible`` additionally substitutes them out
first, which computes the same projection with fewer intermediate rows.

Fourier-Motzkin blows up on dense systems, so feasibility runs in two
phases with different sound prunings that must not be mixed: first
duplicate-direction pruning (keep the tightest constant per normalized
coefficient vector), and if that exceeds the row cap, a restart with
Kohler's ancestor-count rule, which bounds growth on dense instances but
is only valid when dominated rows are not discarded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

import numpy as np

from .errors import EnumerationCapError, SchemaError

__all__ = [
    "LinearConstraint",
    "RateSystem",
    "eliminate",
    "feasible",
    "feasible_with_witness",
    "evaluate_point",
    "substitute",
    "dump",
]

DEFAULT_TOL = 1e-7
DEFAULT_ROW_CAP = 400_000
_SOFT_ROW_CAP = 40_000
_SUBSUMED_ROW_CAP = 150_000
_SUBSUME_SLACK = 1e-11
_RELATIONS = ("<=", ">=", "==")

_Coeffs = tuple[Fraction, ...]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class LinearConstraint:
    """coeffs . x  <relation>  constant."""

    coeffs: _Coeffs
    relation: str
    constant: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(_frac(c) for c in self.coeffs))
        if self.relation not in _RELATIONS:
            raise SchemaError(f"relation must be one of {_RELATIONS}")
        c = self.constant
        if isinstance(c, float) and (c != c or abs(c) == float("inf")):
            raise SchemaError("constant term must be finite")


@dataclass(frozen=True)
class RateSystem:
    """A system of linear constraints over named variables.

    ``nonneg_vars`` lists variables implicitly constrained to be >= 0.
    """

    variables: tuple[str, ...]
    constraints: tuple[LinearConstraint, ...]
    nonneg_vars: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "nonneg_vars", frozenset(self.nonneg_vars))
        if len(set(self.variables)) != len(self.variables):
            raise SchemaError("duplicate variable names")
        n = len(self.variables)
        for c in self.constraints:
            if len(c.coeffs) != n:
                raise SchemaError(
                    f"constraint has {len(c.coeffs)} coefficients for {n} variables"
                )
        unknown = self.nonneg_vars - set(self.variables)
        if unknown:
            raise SchemaError(f"nonneg variables not in system: {sorted(unknown)}")

    def var_index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise SchemaError(f"unknown variable {name!r}") from None


# ---------------------------------------------------------------------------
# internal representation: rows (coeffs, const, history) with coeffs.x <= const
# ---------------------------------------------------------------------------

_Row = tuple[_Coeffs, float, frozenset]


def _rows_of(system: RateSystem) -> list[_Row]:
    rows: list[tuple[_Coeffs, float]] = []
    for c in system.constraints:
        if c.relation in ("<=", "=="):
            rows.append((c.coeffs, c.constant))
        if c.relation in (">=", "=="):
            rows.append((tuple(-x for x in c.coeffs), -c.constant))
    zero = Fraction(0)
    n = len(system.variables)
    for name in system.nonneg_vars:
        i = system.variables.index(name)
        rows.append((tuple(Fraction(-1) if j == i else zero for j in range(n)), 0.0))
    return [(c, v, frozenset([i])) for i, (c, v) in enumerate(rows)]


def _normalized(coeffs: _Coeffs):
    scale = next((abs(c) for c in coeffs if c != 0), None)
    if scale is None:
        return None, None
    return tuple(c / scale for c in coeffs), scale


def _subsume_nonneg(rows: list[_Row], limit: int = 15_000) -> list[_Row]:
    """Drop rows implied by a componentwise-dominating row.

    Valid only when every remaining variable is nonnegative: if
    a2 >= a1 componentwise and b2 <= b1 then a1.x <= a2.x <= b2 <= b1 for
    every x >= 0, so row 1 is redundant.  The orthant itself is certified
    by the single-variable rows -c*x <= 0, which therefore may dominate
    but are never dropped.  Ties break by position, keeping the relation
    acyclic.  Skipped for exact (Fraction) constants, very wide
    coefficients, or row counts past ``limit``.
    """
    n = len(rows)
    if n <= 1 or n > limit or not rows[0][0]:
        return rows
    if not all(isinstance(r[1], float) for r in rows):
        return rows
    m = len(rows[0][0])
    C = np.zeros((n, m), dtype=np.int64)
    b = np.zeros(n, dtype=np.float64)
    for i, (coeffs, const, _) in enumerate(rows):
        scale = 1
        for c in coeffs:
            if c != 0:
                scale = scale * c.denominator // gcd(scale, c.denominator)
        nums = [int(c * scale) for c in coeffs]
        g = 0
        for v in nums:
            g = gcd(g, abs(v))
        g = g or 1
        if max((abs(v) for v in nums), default=0) // g > 2**31:
            return rows
        C[i] = [v // g for v in nums]
        b[i] = const * (scale / g)
    idx = np.arange(n)
    keep = np.ones(n, dtype=bool)
    protected = ((C < 0).sum(axis=1) == 1) & ((C != 0).sum(axis=1) == 1) & (b <= 0)
    # slack absorbs entropy-constant roundoff (~1e-15); it relaxes dropped
    # rows by at most this much, far below the feasibility tolerances used
    slack = _SUBSUME_SLACK
    block = max(1, 2**22 // (max(n, 1) * m))
    for start in range(0, n, block):
        stop = min(start + block, n)
        Ci = C[start:stop][:, None, :]
        bi = b[start:stop][:, None]
        ge = (C[None, :, :] >= Ci).all(axis=2) & (b[None, :] <= bi + slack)
        neq = (C[None, :, :] != Ci).any(axis=2)
        strict = ge & (neq | (b[None, :] < bi) | (idx[None, :] < idx[start:stop][:, None]))
        strict[np.arange(stop - start), idx[start:stop]] = False
        drop = strict.any(axis=1) & ~protected[start:stop]
        keep[start:stop] &= ~drop
    return [rows[i] for i in range(n) if keep[i]]


def _prune_dominance(rows: Iterable[_Row], ncols: int) -> list[_Row]:
    """Keep the tightest constant per coefficient direction; keep at most
    one variable-free row and only when binding."""
    best: dict[_Coeffs, tuple] = {}
    worst_free = None
    for coeffs, const, hist in rows:
        key, scale = _normalized(coeffs)
        if key is None:
            if worst_free is None or const < worst_free[1]:
                worst_free = (coeffs, const, hist)
            continue
        norm_const = const / scale
        if key not in best or norm_const < best[key][0]:
            best[key] = (norm_const, (coeffs, const, hist))
    out = [row for _, row in best.values()]
    if worst_free is not None and worst_free[1] < 0:
        out.append((tuple([Fraction(0)] * ncols), worst_free[1], worst_free[2]))
    return out


def _prune_exact(rows: Iterable[_Row], ncols: int) -> list[_Row]:
    """Keep one copy per exact normalized row (coeffs and constant),
    preferring the smallest ancestor set; binding variable-free row kept."""
    best: dict[tuple, _Row] = {}
    worst_free = None
    for coeffs, const, hist in rows:
        key, scale = _normalized(coeffs)
        if key is None:
            if worst_free is None or const < worst_free[1]:
                worst_free = (coeffs, const, hist)
            continue
        full_key = (key, const / scale)
        if full_key not in best or len(hist) < len(best[full_key][2]):
            best[full_key] = (coeffs, const, hist)
    out = list(best.values())
    if worst_free is not None and worst_free[1] < 0:
        out.append((tuple([Fraction(0)] * ncols), worst_free[1], worst_free[2]))
    return out


def _combine(rows: list[_Row], idx: int, cap: int, kohler_depth: int | None):
    """One elimination step; returns rows still containing column idx."""
    pos, neg, rest = [], [], []
    for row in rows:
        c = row[0][idx]
        if c > 0:
            pos.append(row)
        elif c < 0:
            neg.append(row)
        else:
            rest.append(row)
    if len(pos) * len(neg) + len(rest) > cap:
        raise EnumerationCapError(
            f"fourier-motzkin would create {len(pos) * len(neg)} rows (cap {cap})"
        )
    out = list(rest)
    for pc, pconst, phist in pos:
        a = pc[idx]
        for nc, nconst, nhist in neg:
            hist = phist | nhist
            if kohler_depth is not None and len(hist) > kohler_depth + 1:
                continue
            b = -nc[idx]
            coeffs = tuple(b * x + a * y for x, y in zip(pc, nc))
            out.append((coeffs, b * pconst + a * nconst, hist))
    return out


def _drop_column(rows: list[_Row], idx: int) -> list[_Row]:
    return [
        (coeffs[:idx] + coeffs[idx + 1:], const, hist)
        for coeffs, const, hist in rows
    ]


def _free_rows_violated(rows: list[_Row], tol) -> bool:
    return any(
        const < -tol for coeffs, const, _ in rows if all(c == 0 for c in coeffs)
    )


def _min_pairs_var(rows: list[_Row], nvars: int) -> int:
    best_j, best_score = 0, None
    for j in range(nvars):
        pos = sum(1 for r in rows if r[0][j] > 0)
        neg = sum(1 for r in rows if r[0][j] < 0)
        score = pos * neg
        if score == 0:
            return j
        if best_score is None or score < best_score:
            best_j, best_score = j, score
    return best_j


def _fme_all(
    rows: list[_Row],
    names: list[str],
    tol,
    cap: int,
    kohler: bool,
    record_steps: bool,
    subsume: bool = False,
):
    """Eliminate every variable; returns (feasible, steps).

    ``steps`` holds (name, layout, rows-mentioning-name) per elimination,
    enough to reconstruct a witness by back-substitution.  ``subsume``
    enables orthant dominance pruning and requires every variable to be
    nonnegative; it is incompatible with the Kohler phase.
    """
    names = list(names)
    steps = []
    depth = 0
    prune = _prune_exact if kohler else _prune_dominance
    rows = prune(rows, len(names))
    if subsume and not kohler:
        rows = _subsume_nonneg(rows)
    while names:
        if _free_rows_violated(rows, tol):
            return False, steps
        j = _min_pairs_var(rows, len(names))
        if record_steps:
            steps.append(
                (
                    names[j],
                    tuple(names),
                    [(c, v) for c, v, _ in rows if c[j] != 0],
                )
            )
        depth += 1
        combined = _combine(rows, j, cap, depth if kohler else None)
        rows = prune(_drop_column(combined, j), len(names) - 1)
        if subsume and not kohler:
            rows = _subsume_nonneg(rows)
        del names[j]
    return not _free_rows_violated(rows, tol), steps


def eliminate(system: RateSystem, var: str) -> RateSystem:
    """Project the system onto the remaining variables, exactly.

    A point over the remaining variables satisfies the result iff some
    value of ``var`` extends it to satisfy the input.  Equalities are first
    rewritten as inequality pairs; the eliminated variable's nonnegativity
    bound participates in the pairing and all other bounds are preserved.
    """
    idx = system.var_index(var)
    n = len(system.variables)
    rows = _prune_dominance(_rows_of(system), n)
    rows = _drop_column(_combine(rows, idx, DEFAULT_ROW_CAP, None), idx)
    rows = _prune_dominance(rows, n - 1)
    variables = tuple(v for v in system.variables if v != var)
    constraints = tuple(
        LinearConstraint(c, "<=", v) for c, v, _ in rows
    )
    # nonneg bounds were materialised into rows, so the result carries none
    return RateSystem(variables, constraints, frozenset())


def feasible(
    system: RateSystem, tol: float = DEFAULT_TOL, cap: int = DEFAULT_ROW_CAP
) -> bool:
    """Decide whether the system has a solution.

    Substitutes equalities out, then eliminates all remaining variables in
    greedy fewest-pairs order; accepts iff every resulting variable-free
    inequality holds within ``tol``.
    """
    return feasible_with_witness(system, tol=tol, cap=cap, want_witness=False)[0]


def feasible_with_witness(
    system: RateSystem,
    tol: float = DEFAULT_TOL,
    cap: int = DEFAULT_ROW_CAP,
    want_witness: bool = True,
) -> tuple[bool, dict[str, float] | None]:
    """Like ``feasible`` but reconstructs a satisfying point when one
    exists, by back-substitution through the elimination order."""
    names = list(system.variables)
    plain: list[tuple[_Coeffs, float]] = []
    eqs: list[tuple[list[Fraction], float]] = []
    for c in system.constraints:
        if c.relation == "==":
            eqs.append((list(c.coeffs), c.constant))
        elif c.relation == "<=":
            plain.append((c.coeffs, c.constant))
        else:
            plain.append((tuple(-x for x in c.coeffs), -c.constant))
    zero = Fraction(0)
    for nm in system.nonneg_vars:
        i = names.index(nm)
        plain.append(
            (tuple(Fraction(-1) if j == i else zero for j in range(len(names))), 0.0)
        )

    # --- equality substitution (exact) -----------------------------------
    # trail entries: (pivot name, layout names, coeffs over layout, const)
    eq_trail: list[tuple[str, tuple[str, ...], _Coeffs, float]] = []
    while eqs:
        coeffs, const = eqs.pop(0)
        pivot = next((j for j, c in enumerate(coeffs) if c != 0), None)
        if pivot is None:
            if abs(const) > tol:
                return False, None
            continue
        a = coeffs[pivot]
        eq_trail.append((names[pivot], tuple(names), tuple(coeffs), const))

        def _subst(rc, rconst):
            b = rc[pivot]
            if b == 0:
                return [x for j, x in enumerate(rc) if j != pivot], rconst
            f = b / a
            new = [rc[j] - f * coeffs[j] for j in range(len(rc)) if j != pivot]
            return new, rconst - f * const

        plain = [
            (tuple(nc), nconst)
            for nc, nconst in (_subst(rc, rv) for rc, rv in plain)
        ]
        eqs = [_subst(ec, ev) for ec, ev in eqs]
        del names[pivot]

    rows = [(c, v, frozenset([i])) for i, (c, v) in enumerate(plain)]
    all_nonneg = all(n in system.nonneg_vars for n in names)

    # --- fourier-motzkin, dominance pruning first, Kohler restart on blowup
    # (orthant subsumption keeps structured all-nonnegative systems small,
    # so those get a larger first-phase budget)
    soft = _SUBSUMED_ROW_CAP if all_nonneg else _SOFT_ROW_CAP
    try:
        ok, steps = _fme_all(
            rows, names, tol, min(cap, soft), kohler=False,
            record_steps=want_witness, subsume=all_nonneg,
        )
    except EnumerationCapError:
        ok, steps = _fme_all(
            rows, names, tol, cap, kohler=True, record_steps=want_witness
        )
    if not ok:
        return False, None
    if not want_witness:
        return True, None

    # --- back-substitution -------------------------------------------------
    values: dict[str, float] = {}

    def _pick(lo: float, hi: float) -> float:
        if lo == -float("inf") and hi == float("inf"):
            return 0.0
        if lo == -float("inf"):
            return min(0.0, hi)
        if hi == float("inf"):
            return max(0.0, lo)
        return 0.5 * (lo + hi)

    for name, layout, vrows in reversed(steps):
        j = layout.index(name)
        lo, hi = -float("inf"), float("inf")
        for coeffs, const in vrows:
            rest = sum(
                float(c) * values[layout[k]]
                for k, c in enumerate(coeffs)
                if k != j and c != 0
            )
            bound = (float(const) - rest) / float(coeffs[j])
            if coeffs[j] > 0:
                hi = min(hi, bound)
            else:
                lo = max(lo, bound)
        values[name] = _pick(lo, hi)
    for name, layout, coeffs, const in reversed(eq_trail):
        j = layout.index(name)
        rest = sum(
            float(c) * values[layout[k]]
            for k, c in enumerate(coeffs)
            if k != j and c != 0
        )
        values[name] = (float(const) - rest) / float(coeffs[j])
    return True, {v: values.get(v, 0.0) for v in system.variables}


def evaluate_point(
    system: RateSystem, assignment: Mapping[str, float], tol: float = DEFAULT_TOL
) -> bool:
    """True iff the assignment satisfies every constraint within tol."""
    missing = [v for v in system.variables if v not in assignment]
    if missing:
        raise SchemaError(f"assignment missing variables: {missing}")
    x = [float(assignment[v]) for v in system.variables]
    for c in system.constraints:
        lhs = sum(float(cc) * xv for cc, xv in zip(c.coeffs, x) if cc != 0)
        if c.relation == "<=" and lhs > float(c.constant) + tol:
            return False
        if c.relation == ">=" and lhs < float(c.constant) - tol:
            return False
        if c.relation == "==" and abs(lhs - float(c.constant)) > tol:
            return False
    return all(float(assignment[n]) >= -tol for n in system.nonneg_vars)


def substitute(system: RateSystem, values: Mapping[str, float]) -> RateSystem:
    """Pin some variables to numbers, folding them into the constants."""
    for v in values:
        system.var_index(v)
    keep_idx = [i for i, v in enumerate(system.variables) if v not in values]
    new_vars = tuple(system.variables[i] for i in keep_idx)
    out = []
    for c in system.constraints:
        shift = sum(
            float(c.coeffs[i]) * float(values[v])
            for i, v in enumerate(system.variables)
            if v in values and c.coeffs[i] != 0
        )
        out.append(
            LinearConstraint(
                tuple(c.coeffs[i] for i in keep_idx), c.relation, c.constant - shift
            )
        )
    # a pinned nonnegative variable must itself be nonnegative
    for name in system.nonneg_vars & set(values):
        if float(values[name]) < 0:
            out.append(
                LinearConstraint(tuple([Fraction(0)] * len(new_vars)), "<=", -1.0)
            )
    return RateSystem(new_vars, tuple(out), system.nonneg_vars - set(values))


def dump(system: RateSystem) -> str:
    """Plain-text dump, one constraint per line, rationals as p/q,
    variables in declared order; stable for diffing."""
    lines = []
    for c in system.constraints:
        terms = [
            f"{coef} {v}"
            for v, coef in zip(system.variables, c.coeffs)
            if coef != 0
        ]
        lhs = " + ".join(terms) if terms else "0"
        lines.append(f"{lhs} {c.relation} {c.constant!r}")
    if system.nonneg_vars:
        lines.append("nonneg: " + ", ".join(sorted(system.nonneg_vars)))
    return "\n".join(lines)
