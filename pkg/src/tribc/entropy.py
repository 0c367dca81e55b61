"""Discrete probability tensors with named axes and information measures.

Everything downstream (rate-region constants, Gelfand-Pinsker objectives,
Markov-chain audits) is an exact computation on a finite joint pmf, so this
module is deliberately boring: a labelled tensor, marginalisation, Shannon
quantities in bits, and the scalar binary-entropy helpers.

Conventions: log base 2 throughout, 0*log(0) = 0, conditional quantities
average only over conditioning events of positive probability (which the
entropy-difference formulas do automatically).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, SchemaError

__all__ = [
    "Axis",
    "LabeledJointPmf",
    "InfoExpr",
    "binary_entropy",
    "binary_convolution",
    "binary_entropy_inverse",
    "info_quantity",
    "ci_check",
]

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Axis:
    name: str
    size: int

    def __post_init__(self) -> None:
        if not self.name:
            raise SchemaError("axis name must be a non-empty string")
        if self.size < 1:
            raise SchemaError(f"axis {self.name!r} has non-positive size {self.size}")


@dataclass(frozen=True)
class LabeledJointPmf:
    """A joint pmf over finitely many named axes, stored row-major.

    ``probs`` is reshaped to the axis sizes and validated: entries
    nonnegative, total mass 1 within 1e-12, axis names unique.
    """

    axes: tuple[Axis, ...]
    probs: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        axes = tuple(
            a if isinstance(a, Axis) else Axis(a[0], int(a[1])) for a in self.axes
        )
        object.__setattr__(self, "axes", axes)
        names = [a.name for a in axes]
        if len(set(names)) != len(names):
            raise SchemaError(f"duplicate axis names in {names}")
        shape = tuple(a.size for a in axes)
        arr = np.asarray(self.probs, dtype=np.float64)
        if arr.size != int(np.prod(shape)):
            raise SchemaError(
                f"tensor has {arr.size} entries, axes imply {int(np.prod(shape))}"
            )
        arr = arr.reshape(shape)
        if np.any(arr < 0):
            raise SchemaError("pmf entries must be nonnegative")
        total = float(arr.sum())
        if abs(total - 1.0) > _SUM_TOL:
            raise SchemaError(f"pmf entries sum to {total!r}, expected 1 within 1e-12")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    # -- axis bookkeeping -------------------------------------------------

    @property
    def axis_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.axes)

    def axis_index(self, name: str) -> int:
        for i, a in enumerate(self.axes):
            if a.name == name:
                return i
        raise SchemaError(f"unknown axis {name!r}; have {self.axis_names}")

    def axis_size(self, name: str) -> int:
        return self.axes[self.axis_index(name)].size

    def _check_names(self, names: Iterable[str]) -> tuple[str, ...]:
        names = tuple(names)
        for n in names:
            self.axis_index(n)
        if len(set(names)) != len(names):
            raise SchemaError(f"repeated axis in group {names}")
        return names

    # -- marginals and entropies ------------------------------------------

    def marginal(self, names: Sequence[str]) -> "LabeledJointPmf":
        """Marginal pmf over ``names`` in the given order."""
        names = self._check_names(names)
        keep = [self.axis_index(n) for n in names]
        drop = tuple(i for i in range(len(self.axes)) if i not in keep)
        arr = self.probs.sum(axis=drop) if drop else self.probs
        arr = np.moveaxis(arr, [sorted(keep).index(i) for i in keep], range(len(keep)))
        return LabeledJointPmf(tuple(self.axes[i] for i in keep), arr)

    def entropy(self, names: Sequence[str]) -> float:
        """Joint entropy H(names) in bits."""
        key = ("H", tuple(sorted(names)))
        if key not in self._cache:
            names = self._check_names(names)
            if not names:
                self._cache[key] = 0.0
            else:
                keep = sorted(self.axis_index(n) for n in names)
                drop = tuple(i for i in range(len(self.axes)) if i not in keep)
                arr = self.probs.sum(axis=drop) if drop else self.probs
                p = arr.reshape(-1)
                p = p[p > 0]
                self._cache[key] = float(-(p * np.log2(p)).sum())
        return self._cache[key]

    def expectation(self, name: str, values: Sequence[float]) -> float:
        """E[f(axis)] for a scalar table ``values`` indexed by the axis."""
        vals = np.asarray(values, dtype=np.float64)
        if vals.shape != (self.axis_size(name),):
            raise SchemaError(
                f"value table length {vals.size} != axis {name!r} size"
            )
        return float(self.marginal([name]).probs @ vals)

    # -- derived axes ------------------------------------------------------

    def with_derived_axis(
        self,
        name: str,
        size: int,
        sources: Sequence[str],
        fn: Callable[..., np.ndarray],
    ) -> "LabeledJointPmf":
        """Append a deterministic axis ``name = fn(*sources)``.

        ``fn`` must accept integer index arrays (one per source axis,
        broadcastable) and return values in ``range(size)``.
        """
        if name in self.axis_names:
            raise SchemaError(f"axis {name!r} already exists")
        sources = self._check_names(sources)
        src_idx = [self.axis_index(n) for n in sources]
        grids = np.indices(tuple(self.axes[i].size for i in src_idx))
        vals = np.asarray(fn(*grids), dtype=np.int64)
        if vals.min() < 0 or vals.max() >= size:
            raise SchemaError(f"derived axis {name!r} values escape range({size})")
        onehot = np.zeros(vals.shape + (size,), dtype=np.float64)
        np.put_along_axis(onehot, vals[..., None], 1.0, axis=-1)
        # broadcast the indicator onto the full axis layout: source dims in
        # their original positions, singleton everywhere else, new axis last
        bshape = [1] * len(self.axes) + [size]
        for k, i in enumerate(src_idx):
            bshape[i] = self.axes[i].size
        ranks = list(np.argsort(np.argsort(src_idx)))
        ind = np.moveaxis(onehot, range(len(src_idx)), ranks).reshape(bshape)
        new = self.probs[..., None] * ind
        return LabeledJointPmf(self.axes + (Axis(name, size),), new)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "axes": [{"name": a.name, "size": a.size} for a in self.axes],
            "probs": [float(v) for v in self.probs.reshape(-1)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "LabeledJointPmf":
        try:
            axes = tuple(Axis(str(a["name"]), int(a["size"])) for a in doc["axes"])
            probs = np.asarray(doc["probs"], dtype=np.float64)
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed pmf document: {exc}") from exc
        return cls(axes, probs)

    @classmethod
    def from_json(cls, text: str) -> "LabeledJointPmf":
        return cls.from_json_dict(json.loads(text))


# ---------------------------------------------------------------------------
# scalar helpers
# ---------------------------------------------------------------------------


def binary_entropy(p: float) -> float:
    """h_b(p) = -p log2 p - (1-p) log2 (1-p), with h_b(0) = h_b(1) = 0."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"binary_entropy needs p in [0,1], got {p}")
    out = 0.0
    if p > 0.0:
        out -= p * math.log2(p)
    if p < 1.0:
        out -= (1.0 - p) * math.log2(1.0 - p)
    return out


def binary_convolution(a: float, b: float) -> float:
    """a * b = a(1-b) + (1-a)b, the cascade of two binary symmetric flips."""
    if not 0.0 <= a <= 1.0 or not 0.0 <= b <= 1.0:
        raise DomainError(f"binary_convolution needs a,b in [0,1], got {a}, {b}")
    return a * (1.0 - b) + (1.0 - a) * b


def binary_entropy_inverse(h: float, tol: float = 1e-12) -> float:
    """The unique p in [0, 1/2] with h_b(p) = h, by bisection."""
    if not 0.0 <= h <= 1.0:
        raise DomainError(f"binary_entropy_inverse needs h in [0,1], got {h}")
    if h == 0.0:
        return 0.0
    if h == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < h:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# information expressions
# ---------------------------------------------------------------------------

_KINDS = (
    "entropy",
    "conditional_entropy",
    "mutual_info",
    "conditional_mutual_info",
    "multi_info",
)


@dataclass(frozen=True)
class InfoExpr:
    """A Shannon quantity: target groups plus an optional conditioner.

    ``multi_info`` takes exactly three target groups and expands as
    I(A;B;C|D) = I(A;B|D) + I(AB;C|D).
    """

    kind: str
    targets: tuple[tuple[str, ...], ...]
    given: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "targets", tuple(tuple(g) for g in self.targets)
        )
        object.__setattr__(self, "given", tuple(self.given))
        if self.kind not in _KINDS:
            raise SchemaError(f"unknown expression kind {self.kind!r}")
        n = len(self.targets)
        expected = {
            "entropy": 1,
            "conditional_entropy": 1,
            "mutual_info": 2,
            "conditional_mutual_info": 2,
            "multi_info": 3,
        }[self.kind]
        if n != expected:
            raise SchemaError(f"{self.kind} takes {expected} target groups, got {n}")
        if self.kind in ("entropy", "mutual_info") and self.given:
            raise SchemaError(f"{self.kind} does not take a conditioner")
        flat: list[str] = [n for g in self.targets for n in g] + list(self.given)
        if len(set(flat)) != len(flat):
            raise SchemaError(f"axis appears twice across groups: {flat}")
        if any(len(g) == 0 for g in self.targets):
            raise SchemaError("target groups must be non-empty")


def _H(pmf: LabeledJointPmf, *groups: Sequence[str]) -> float:
    names: list[str] = []
    for g in groups:
        names.extend(g)
    return pmf.entropy(names)


def _cond_mi(pmf, a, b, c) -> float:
    return _H(pmf, a, c) + _H(pmf, b, c) - _H(pmf, a, b, c) - _H(pmf, c)


def info_quantity(pmf: LabeledJointPmf, expr: InfoExpr) -> float:
    """Evaluate ``expr`` against ``pmf`` exactly, in bits."""
    for g in expr.targets:
        pmf._check_names(g)
    pmf._check_names(expr.given)
    t, c = expr.targets, expr.given
    if expr.kind == "entropy":
        return _H(pmf, t[0])
    if expr.kind == "conditional_entropy":
        return _H(pmf, t[0], c) - _H(pmf, c)
    if expr.kind == "mutual_info":
        return _H(pmf, t[0]) + _H(pmf, t[1]) - _H(pmf, t[0], t[1])
    if expr.kind == "conditional_mutual_info":
        return _cond_mi(pmf, t[0], t[1], c)
    # multi_info, expanded exactly as I(A;B|D) + I(AB;C|D)
    ab = tuple(t[0]) + tuple(t[1])
    return _cond_mi(pmf, t[0], t[1], c) + _cond_mi(pmf, ab, t[2], c)


def ci_check(
    pmf: LabeledJointPmf,
    group_a: Sequence[str],
    group_b: Sequence[str],
    group_c: Sequence[str] = (),
    tol: float = 1e-9,
) -> bool:
    """True iff I(A;B|C) <= tol, i.e. A and B conditionally independent."""
    a, b, c = tuple(group_a), tuple(group_b), tuple(group_c)
    if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
        raise SchemaError(f"ci_check groups must be disjoint: {a} {b} {c}")
    expr = InfoExpr("conditional_mutual_info", (a, b), c)
    return info_quantity(pmf, expr) <= tol


def parse_expr(text: str) -> InfoExpr:
    """Parse "H(A,B)", "H(A|B)", "I(A;B|C,D)" or "I(A;B;C)" into an
    expression; axis names are comma-separated within each group."""
    s = text.strip()
    if len(s) < 4 or s[1] != "(" or not s.endswith(")") or s[0] not in "HI":
        raise SchemaError(f"cannot parse expression {text!r}; expected H(...) or I(...)")
    head, body = s[0], s[2:-1]
    if "|" in body:
        left, _, cond = body.partition("|")
        given = tuple(t.strip() for t in cond.split(",") if t.strip())
    else:
        left, given = body, ()
    groups = tuple(
        tuple(t.strip() for t in part.split(",") if t.strip())
        for part in left.split(";")
    )
    if head == "H":
        if len(groups) != 1:
            raise SchemaError("entropy takes a single group, e.g. H(A,B|C)")
        kind = "conditional_entropy" if given else "entropy"
        return InfoExpr(kind, groups, given)
    if len(groups) == 2:
        kind = "conditional_mutual_info" if given else "mutual_info"
        return InfoExpr(kind, groups, given)
    if len(groups) == 3:
        return InfoExpr("multi_info", groups, given)
    raise SchemaError("mutual information takes two or three groups")
