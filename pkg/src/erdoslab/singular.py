"""Singular series of prime tuples and the sums built from them.

A tuple of offsets gets a local residue count nu(p) at every prime, an
Euler-product density correction computed as a truncated product with a
certified multiplicative tail bound, and two aggregate sums: the
pair-correlation sum over all pairs in a window and Gallagher-style sums
over k-tuple families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import BoundsError
from .primes import PrimeTable, small_sieve

# Multiplicative tail of the omitted p > P factors is bounded by
# exp(TAIL_CONSTANT * k^2 / P) - 1; validated against brute force for
# k <= 10 in the test suite.
TAIL_CONSTANT = 2.0

DEFAULT_TRUNCATION = 100_000

EULER_GAMMA = float(np.euler_gamma)

_LD = np.longdouble


class OffsetTuple:
    """A finite set of distinct non-negative integer offsets h_1 < ... < h_k."""

    __slots__ = ("offsets",)

    def __init__(self, offsets=()):
        offs = tuple(sorted(int(h) for h in offsets))
        if any(h < 0 for h in offs):
            raise ValueError(f"offsets must be non-negative, got {offs}")
        if len(set(offs)) != len(offs):
            raise ValueError(f"offsets must be distinct, got {offs}")
        self.offsets = offs

    @property
    def k(self) -> int:
        return len(self.offsets)

    @property
    def span(self) -> int:
        return self.offsets[-1] - self.offsets[0] if self.offsets else 0

    def shifted(self, c: int) -> "OffsetTuple":
        if self.offsets and self.offsets[0] + c < 0:
            raise ValueError(f"shift {c} makes offsets negative")
        return OffsetTuple(h + c for h in self.offsets)

    def __iter__(self):
        return iter(self.offsets)

    def __eq__(self, other):
        return isinstance(other, OffsetTuple) and self.offsets == other.offsets

    def __hash__(self):
        return hash(self.offsets)

    def __repr__(self):
        return f"OffsetTuple({list(self.offsets)})"


def _is_prime_small(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def nu(tup: OffsetTuple, p: int) -> int:
    """Number of distinct residue classes mod p occupied by the offsets."""
    p = int(p)
    if not _is_prime_small(p):
        raise ValueError(f"p={p} is not prime")
    return len({h % p for h in tup})


@dataclass(frozen=True)
class SingularValue:
    """Truncated Euler-product value with a certified multiplicative tail.

    When admissible, the untruncated product lies within
    [value*(1-tail_bound), value*(1+tail_bound)].
    """

    value: float
    truncation_prime: int
    tail_bound: float
    admissible: bool

    def interval(self) -> tuple[float, float]:
        lo = self.value * (1.0 - self.tail_bound)
        hi = self.value * (1.0 + self.tail_bound)
        return (min(lo, hi), max(lo, hi))


_prime_cache: dict[str, np.ndarray] = {}


def _primes_upto(limit: int) -> np.ndarray:
    cached = _prime_cache.get("primes")
    if cached is None or _prime_cache["limit"] < limit:
        _prime_cache["primes"] = small_sieve(limit)
        _prime_cache["limit"] = limit
        cached = _prime_cache["primes"]
    return cached[: np.searchsorted(cached, limit, side="right")]


@lru_cache(maxsize=64)
def _cumlog_full_nu(k: int, truncation_prime: int) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative sum of log[(1 - k/p)/(1 - 1/p)^k] over primes <= P.

    Valid only where nu = k, i.e. for primes beyond both k and the tuple
    span; callers slice accordingly.
    """
    primes = _primes_upto(truncation_prime).astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.log1p(-k / primes) - k * np.log1p(-1.0 / primes)
    logs[primes <= k] = 0.0  # callers slice past p <= max(span, k); keep cumsum finite
    cum = np.cumsum(logs.astype(_LD))
    return _primes_upto(truncation_prime), cum


def singular_series(tup: OffsetTuple, truncation_prime: int | None = None) -> SingularValue:
    """Truncated singular-series product prod_{p<=P} (1 - nu(p)/p)/(1 - 1/p)^k.

    The truncation prime must exceed max(2k^2, span) so that nu = k for
    every omitted prime, which makes the tail formula
    exp(TAIL_CONSTANT * k^2 / P) - 1 valid.
    """
    k = tup.k
    span = tup.span
    if truncation_prime is None:
        truncation_prime = max(DEFAULT_TRUNCATION, 2 * k * k, 2 * span)
    P = int(truncation_prime)
    if k and P <= max(2 * k * k, span):
        raise ValueError(
            f"truncation prime {P} too small; need > max(2k^2, span) = {max(2 * k * k, span)}"
        )
    if k == 0:
        return SingularValue(1.0, P, 0.0, True)

    tail = float(np.expm1(TAIL_CONSTANT * k * k / P))
    head_bound = max(span, k)
    primes_all, cum = _cumlog_full_nu(k, P)
    cut = int(np.searchsorted(primes_all, head_bound, side="right"))

    # explicit factors where nu can differ from k
    log_head = _LD(0.0)
    for p in primes_all[:cut]:
        p = int(p)
        v = len({h % p for h in tup.offsets})
        if v == p:
            return SingularValue(0.0, P, 0.0, False)
        log_head += _LD(math.log1p(-v / p) - k * math.log1p(-1.0 / p))

    log_tail_part = cum[-1] - (cum[cut - 1] if cut > 0 else _LD(0.0))
    return SingularValue(float(np.exp(log_head + log_tail_part)), P, tail, True)


_pair_table_cache: dict[int, np.ndarray] = {}


def pair_singular_table(h_max: int, truncation_prime: int = DEFAULT_TRUNCATION) -> np.ndarray:
    """Values of the pair singular series for every gap d in [0, h_max].

    Entry d holds the {0, d} value (0 for odd d, and entry 0 is 0 by
    convention since {0, 0} is not a pair). Computed by one sieve pass:
    even gaps start at twice the twin constant and each odd prime divisor
    p contributes (p-1)/(p-2).
    """
    P = int(truncation_prime)
    cached = _pair_table_cache.get(P)
    if cached is not None and cached.size > h_max:
        return cached[: h_max + 1]

    primes = _primes_upto(P)
    odd = primes[primes > 2].astype(np.float64)
    twin2 = 2.0 * float(np.exp(np.cumsum(np.log1p(-1.0 / (odd - 1.0) ** 2).astype(_LD))[-1]))

    vals = np.zeros(h_max + 1, dtype=np.float64)
    vals[2::2] = twin2
    for p in _primes_upto(min(h_max, P)):
        p = int(p)
        if p == 2:
            continue
        vals[p::p] *= (p - 1.0) / (p - 2.0)
    _pair_table_cache[P] = vals
    return vals


def pair_correlation_sum(
    H: int, table: PrimeTable | None = None, truncation_prime: int = DEFAULT_TRUNCATION
) -> float:
    """2 * sum of pair singular-series values over 0 < h1 < h2 <= H.

    Shift invariance reduces the double sum to sum_d 2(H-d) * pair(d).
    """
    H = int(H)
    if H < 2:
        raise ValueError(f"H must be >= 2, got {H}")
    if table is not None and table.limit < truncation_prime:
        raise BoundsError(
            f"table limit {table.limit} below truncation prime {truncation_prime}"
        )
    vals = pair_singular_table(H - 1, truncation_prime)
    d = np.arange(H, dtype=np.float64)
    return float(2.0 * np.sum((H - d[1:]) * vals[1:]))


def pair_correlation_curve(
    h_values, truncation_prime: int = DEFAULT_TRUNCATION
) -> np.ndarray:
    """pair_correlation_sum evaluated at many H via shared prefix sums."""
    hs = np.asarray(h_values, dtype=np.int64)
    if hs.size == 0 or hs.min() < 2:
        raise ValueError("H values must be >= 2")
    vals = pair_singular_table(int(hs.max()) - 1, truncation_prime)
    s1 = np.concatenate([[0.0], np.cumsum(vals[1:])])
    s2 = np.concatenate([[0.0], np.cumsum(np.arange(1, vals.size) * vals[1:])])
    return 2.0 * (hs * s1[hs - 1] - s2[hs - 1])


def pair_correlation_asymptotic(H: float) -> float:
    """Second-order prediction H^2 - H log H + (1 - gamma - log 2 pi) H."""
    return H * H - H * math.log(H) + (1.0 - EULER_GAMMA - math.log(2.0 * math.pi)) * H


def gallagher_sum(k: int, H: int, truncation_prime: int = DEFAULT_TRUNCATION) -> float:
    """Sum of singular-series values over the k-tuple family in (0, H].

    k=1 sums the singleton value 1 over the H offsets; k=2 sums the pair
    value over gaps h <= H (the h=1 term vanishes); k=3 sums over gap
    pairs h < h' <= H. Larger k is unsupported (exact enumeration only).
    """
    H = int(H)
    if H < 2:
        raise ValueError(f"H must be >= 2, got {H}")
    if k == 1:
        return float(H)
    if k == 2:
        vals = pair_singular_table(H, truncation_prime)
        return float(np.sum(vals[1:]))
    if k == 3:
        if H > 300:
            raise ValueError(f"k=3 enumeration capped at H=300, got {H}")
        total = _LD(0.0)
        for h1 in range(1, H):
            for h2 in range(h1 + 1, H + 1):
                sv = singular_series(OffsetTuple((0, h1, h2)), truncation_prime)
                total += _LD(sv.value)
        return float(total)
    raise ValueError(f"k={k} unsupported; exact enumeration covers k in 1..3")


def pair_table_to_csv(path: str | Path, h_max: int, header: str | None = None,
                      truncation_prime: int = DEFAULT_TRUNCATION) -> Path:
    """CSV of (d, pair singular-series value) rows for d in [1, h_max]."""
    vals = pair_singular_table(h_max, truncation_prime)
    path = Path(path)
    with open(path, "w") as fh:
        if header:
            fh.write(f"# {header}\n")
        fh.write("d,singular_value\n")
        for d in range(1, h_max + 1):
            fh.write(f"{d},{vals[d]!r}\n")
    return path
