"""Finite-blocklength Monte Carlo for the nested-code scheme on the
three-BSC example channel.

Users 2 and 3 transmit codewords of nested coset codes over GF(2) (the
smaller code's generator is a row prefix of the larger one's, each shifted
by its own uniform bias); receiver 1 decodes the mod-2 sum of their
codewords, which the nesting confines to a single coset, then its own
fixed-composition codeword jointly.  Decoding is minimum Hamming distance
throughout (maximum likelihood for these channels).

Every random object derives from a counter-based generator keyed by
(seed, trial), so trials are independent, order-insensitive, and the run
is reproducible bit for bit.  Codes are redrawn each trial: the estimated
quantity is the ensemble-average block-error rate.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError, EnumerationCapError, SchemaError

__all__ = [
    "GF2Matrix",
    "NestedCosetCode",
    "build_nested_codes",
    "sum_closure_check",
    "SimConfig",
    "UserErrorStats",
    "SimStatistics",
    "simulate_example1",
]

_DEFAULT_CAP = 2**20
_REGEN_LIMIT = 16


@dataclass(frozen=True)
class GF2Matrix:
    """Rows of a binary matrix packed as integers, LSB = column 0."""

    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 1:
            raise SchemaError("matrix dimensions must be positive")
        if len(self.bits) != self.rows:
            raise SchemaError("bit rows do not match the declared row count")
        if any(b < 0 or b >> self.cols for b in self.bits):
            raise SchemaError("row bits exceed the declared width")

    @property
    def rank(self) -> int:
        return _rank(list(self.bits))


def _rank(rows: list[int]) -> int:
    rank = 0
    basis: list[int] = []
    for row in rows:
        cur = row
        for b in basis:
            cur = min(cur, cur ^ b)
        if cur:
            basis.append(cur)
            basis.sort(reverse=True)
            rank += 1
    return rank


def _reduce(vector: int, basis: list[int]) -> int:
    cur = vector
    for b in basis:
        cur = min(cur, cur ^ b)
    return cur


def _row_basis(rows: Iterable[int]) -> list[int]:
    basis: list[int] = []
    for row in rows:
        cur = _reduce(row, basis)
        if cur:
            basis.append(cur)
            basis.sort(reverse=True)
    return basis


@dataclass(frozen=True)
class NestedCosetCode:
    """A coset code with an inner code forming a row prefix, plus bins.

    ``bin_of`` maps each of the 2**k message indices to its bin; bins form
    a balanced partition so every bin is non-empty at desk blocklengths.
    """

    inner_generator: GF2Matrix
    outer_generator: GF2Matrix
    bias: int
    bin_of: np.ndarray
    n_bins: int
    regenerations: int = 0

    def __post_init__(self) -> None:
        gi, go = self.inner_generator, self.outer_generator
        if gi.cols != go.cols:
            raise SchemaError("inner and outer generators must share the width")
        if gi.rows > go.rows:
            raise SchemaError("inner code cannot have more rows than the outer")
        if tuple(go.bits[: gi.rows]) != tuple(gi.bits):
            raise SchemaError("inner generator must be a bit-exact row prefix")
        if self.bias < 0 or self.bias >> go.cols:
            raise SchemaError("bias vector exceeds the blocklength")
        size = 1 << go.rows
        arr = np.asarray(self.bin_of, dtype=np.int64)
        if arr.shape != (size,):
            raise SchemaError("bin map must cover every codeword index")
        if arr.min() < 0 or arr.max() >= self.n_bins:
            raise SchemaError("bin labels out of range")
        counts = np.bincount(arr, minlength=self.n_bins)
        if (counts == 0).any():
            raise SchemaError("every bin must be non-empty")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "bin_of", arr)

    @property
    def n(self) -> int:
        return self.outer_generator.cols

    @property
    def k(self) -> int:
        return self.outer_generator.rows

    def codewords(self) -> np.ndarray:
        """All 2**k codewords (message order), bias included, as uint64."""
        words = np.zeros(1, dtype=np.uint64)
        for row in self.outer_generator.bits:
            words = np.concatenate([words, words ^ np.uint64(row)])
        return words ^ np.uint64(self.bias)

    def members_of_bin(self, b: int) -> np.ndarray:
        return np.nonzero(self.bin_of == b)[0]


def _random_bits(rng: np.random.Generator, rows: int, cols: int) -> list[int]:
    out = []
    for _ in range(rows):
        bits = rng.integers(0, 2, size=cols)
        out.append(int("".join("1" if b else "0" for b in bits[::-1]), 2) if cols else 0)
    return out


def _balanced_partition(rng: np.random.Generator, size: int, bins: int) -> np.ndarray:
    perm = rng.permutation(size)
    bin_of = np.zeros(size, dtype=np.int64)
    width = size // bins
    for b in range(bins):
        bin_of[perm[b * width : (b + 1) * width]] = b
    return bin_of


def build_nested_codes(
    n: int,
    k2: int,
    k3: int,
    seed: int,
    bin_bits2: int | None = None,
    bin_bits3: int | None = None,
) -> tuple[NestedCosetCode, NestedCosetCode]:
    """Draw a nested pair: the smaller generator is the first k3 rows of
    the larger one, entries independent and uniform; independent biases.

    Rank-deficient draws are regenerated (up to 16 attempts) and the count
    is recorded, so code sizes match their nominal 2**k.
    """
    if not 0 < k3 <= k2 <= n:
        raise DomainError(f"need 0 < k3 <= k2 <= n, got k3={k3}, k2={k2}, n={n}")
    if n > 63:
        raise DomainError(f"blocklength {n} exceeds the packed-word limit 63")
    b2 = k2 if bin_bits2 is None else bin_bits2
    b3 = k3 if bin_bits3 is None else bin_bits3
    if not 0 <= b2 <= k2 or not 0 <= b3 <= k3:
        raise DomainError("bin bits cannot exceed the code dimension")
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 0], dtype=np.uint64)))
    regen = 0
    while True:
        rows = _random_bits(rng, k2, n)
        if _rank(rows) == k2:
            break
        regen += 1
        if regen >= _REGEN_LIMIT:
            raise DomainError(
                f"no full-rank {k2}x{n} generator found in {_REGEN_LIMIT} draws"
            )
    g2 = GF2Matrix(k2, n, tuple(rows))
    g3 = GF2Matrix(k3, n, tuple(rows[:k3]))
    bias2 = _random_bits(rng, 1, n)[0]
    bias3 = _random_bits(rng, 1, n)[0]
    bins2 = _balanced_partition(rng, 1 << k2, 1 << b2)
    bins3 = _balanced_partition(rng, 1 << k3, 1 << b3)
    code2 = NestedCosetCode(g3, g2, bias2, bins2, 1 << b2, regen)
    code3 = NestedCosetCode(g3, g3, bias3, bins3, 1 << b3, regen)
    return code2, code3


def sum_closure_check(
    code2: NestedCosetCode, code3: NestedCosetCode, cap: int = _DEFAULT_CAP
) -> tuple[bool, int]:
    """Enumerate every pairwise codeword sum and verify it stays inside a
    single coset of the larger code's row space; returns the sum-set size.

    The nominal bound from the nesting is 2**max(k2, k3); the size is
    measured, not assumed.
    """
    if code2.n != code3.n:
        raise SchemaError("codes must share one blocklength")
    if (1 << code2.k) * (1 << code3.k) > cap:
        raise EnumerationCapError(
            f"sum enumeration needs {(1 << code2.k) * (1 << code3.k)} pairs (cap {cap})"
        )
    cw2 = code2.codewords()
    cw3 = code3.codewords()
    sums = np.unique(cw2[:, None] ^ cw3[None, :])
    big = code2 if code2.k >= code3.k else code3
    basis = _row_basis(big.outer_generator.bits)
    shift = np.uint64(code2.bias ^ code3.bias)
    holds = all(_reduce(int(v ^ shift), basis) == 0 for v in sums)
    return holds, int(sums.size)


# ---------------------------------------------------------------------------
# Monte Carlo on the example channel
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimConfig:
    n: int
    k2: int
    k3: int
    bin_bits: tuple[int, int, int]  # user 1 codebook bits, users 2 and 3 bin bits
    tau_weight: float
    deltas: tuple[float, float, float]
    trials: int
    seed: int
    cap: int = _DEFAULT_CAP

    def __post_init__(self) -> None:
        if not 0 < self.k3 <= self.k2 <= self.n:
            raise DomainError("need 0 < k3 <= k2 <= n")
        if self.trials < 1:
            raise DomainError("at least one trial required")
        if not 0.0 < self.tau_weight < 0.5:
            raise DomainError("tau_weight must lie strictly inside (0, 0.5)")
        b1, b2, b3 = self.bin_bits
        if b2 > self.k2 or b3 > self.k3 or min(b1, b2, b3) < 0:
            raise DomainError("bin bits cannot exceed the code dimensions")
        w = int(self.tau_weight * self.n)
        if math.comb(self.n, w) < (1 << b1):
            raise DomainError(
                f"cannot place {1 << b1} distinct weight-{w} codewords at n={self.n}"
            )
        if any(not 0.0 < d < 0.5 for d in self.deltas):
            raise DomainError("channel crossovers must lie strictly inside (0, 0.5)")
        if (1 << self.k2) * (1 << b1) > self.cap or (1 << self.k2) > self.cap:
            raise EnumerationCapError("decoder search space exceeds the cap")

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "SimConfig":
        try:
            return cls(
                n=int(doc["n"]),
                k2=int(doc["k2"]),
                k3=int(doc["k3"]),
                bin_bits=tuple(int(v) for v in doc["bin_bits"]),
                tau_weight=float(doc["tau_weight"]),
                deltas=tuple(float(v) for v in doc["deltas"]),
                trials=int(doc["trials"]),
                seed=int(doc["seed"]),
                cap=int(doc.get("cap", _DEFAULT_CAP)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed simulation config: {exc}") from exc


@dataclass(frozen=True)
class UserErrorStats:
    user: int
    trials: int
    errors: int
    rate_estimate: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class SimStatistics:
    config: SimConfig
    users: tuple[UserErrorStats, UserErrorStats, UserErrorStats]

    def to_csv(self) -> str:
        lines = ["user,trials,errors,rate_estimate,ci_low,ci_high,seed,n"]
        for u in self.users:
            lines.append(
                f"{u.user},{u.trials},{u.errors},{u.rate_estimate!r},"
                f"{u.ci_low!r},{u.ci_high!r},{self.config.seed},{self.config.n}"
            )
        return "\n".join(lines) + "\n"


def _wilson(errors: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    phat = errors / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(center - half, 0.0), min(center + half, 1.0)


def _noise_word(rng: np.random.Generator, n: int, delta: float) -> int:
    bits = rng.random(n) < delta
    out = 0
    for i in range(n):
        if bits[i]:
            out |= 1 << i
    return out


def _popcounts(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words)


def _run_trial(config: SimConfig, trial: int) -> tuple[int, int, int]:
    n = config.n
    rng = np.random.Generator(
        np.random.Philox(key=np.array([config.seed, trial], dtype=np.uint64))
    )
    b1, b2, b3 = config.bin_bits
    # fresh code draw: ensemble-average error statistics
    regen = 0
    while True:
        rows = _random_bits(rng, config.k2, n)
        if _rank(rows) == config.k2:
            break
        regen += 1
        if regen >= _REGEN_LIMIT:
            raise DomainError("no full-rank generator found for a trial")
    g2 = GF2Matrix(config.k2, n, tuple(rows))
    g3 = GF2Matrix(config.k3, n, tuple(rows[: config.k3]))
    bias2 = _random_bits(rng, 1, n)[0]
    bias3 = _random_bits(rng, 1, n)[0]
    code2 = NestedCosetCode(
        g3, g2, bias2, _balanced_partition(rng, 1 << config.k2, 1 << b2), 1 << b2
    )
    code3 = NestedCosetCode(
        g3, g3, bias3, _balanced_partition(rng, 1 << config.k3, 1 << b3), 1 << b3
    )
    cw2, cw3 = code2.codewords(), code3.codewords()

    # user 1: distinct fixed-composition codewords of weight floor(tau*n)
    w = int(config.tau_weight * n)
    book1: list[int] = []
    seen = set()
    attempts = 0
    while len(book1) < (1 << b1):
        positions = rng.choice(n, size=w, replace=False) if w else np.array([], int)
        word = 0
        for p in positions:
            word |= 1 << int(p)
        if word not in seen:
            seen.add(word)
            book1.append(word)
        attempts += 1
        if attempts > 200 * (1 << b1):
            raise DomainError("could not draw distinct fixed-composition codewords")
    book1_arr = np.asarray(book1, dtype=np.uint64)

    m1 = int(rng.integers(0, 1 << b1))
    m2 = int(rng.integers(0, 1 << b2))
    m3 = int(rng.integers(0, 1 << b3))
    members2 = code2.members_of_bin(m2)
    members3 = code3.members_of_bin(m3)
    c2 = int(cw2[int(members2[rng.integers(0, len(members2))])])
    c3 = int(cw3[int(members3[rng.integers(0, len(members3))])])
    c1 = int(book1_arr[m1])

    noise1 = _noise_word(rng, n, config.deltas[0])
    noise2 = _noise_word(rng, n, config.deltas[1])
    noise3 = _noise_word(rng, n, config.deltas[2])
    y1 = np.uint64(c1 ^ c2 ^ c3 ^ noise1)
    y2 = np.uint64(c2 ^ noise2)
    y3 = np.uint64(c3 ^ noise3)

    # receivers 2 and 3: minimum distance over their own codebooks
    hat2 = int(np.argmin(_popcounts(cw2 ^ y2)))
    hat3 = int(np.argmin(_popcounts(cw3 ^ y3)))
    err2 = int(code2.bin_of[hat2] != m2)
    err3 = int(code3.bin_of[hat3] != m3)

    # receiver 1: joint minimum distance over (codeword sum, own codeword);
    # nesting confines the sums to one coset of the larger row space
    sums = cw2 ^ np.uint64(code3.bias)
    d = _popcounts(sums[:, None] ^ book1_arr[None, :] ^ y1)
    flat = int(np.argmin(d))
    hat1 = flat % (1 << b1)
    err1 = int(hat1 != m1)
    return err1, err2, err3


def simulate_example1(config: SimConfig, threads: int = 1) -> SimStatistics:
    """Ensemble-average block-error rates with Wilson 95% intervals.

    Deterministic given the config: every trial derives its own generator
    from (seed, trial), so results do not depend on execution order or
    thread count.
    """
    trials = range(config.trials)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda t: _run_trial(config, t), trials))
    else:
        outcomes = [_run_trial(config, t) for t in trials]
    totals = [0, 0, 0]
    for e1, e2, e3 in outcomes:
        totals[0] += e1
        totals[1] += e2
        totals[2] += e3
    users = []
    for user, errors in enumerate(totals, start=1):
        lo, hi = _wilson(errors, config.trials)
        users.append(
            UserErrorStats(
                user=user,
                trials=config.trials,
                errors=errors,
                rate_estimate=errors / config.trials,
                ci_low=lo,
                ci_high=hi,
            )
        )
    return SimStatistics(config, tuple(users))
