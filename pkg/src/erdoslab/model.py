"""Random sifted-set model of primes in a short window.

One uniform residue class is deleted modulo every prime up to a cutoff;
the survivors in (0, window_len] model the shifted primes. This module
selects the cutoff from the Mertens product, computes exact membership
probabilities, draws reproducible Monte Carlo samples, and estimates the
moment and parity statistics of the survivor count, with truncated
binomial (Bonferroni) expansions of the parity as exact companions.

Randomness is a SplitMix64 counter stream per prime: the word consumed by
(seed, prime rank, sample index, attempt) is a pure function of those
four integers, so results are independent of evaluation order and worker
count. Residues are drawn by rejection from 64-bit words to avoid modulo
bias.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BoundsError
from .primes import PrimeTable

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)

# 64-bit words reserved per (sample, prime) residue draw; the chance that
# rejection consumes even two of them is below p * 2^-64 per draw.
_DRAW_BLOCK = 8

_LD = np.longdouble


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


def _stream_key(seed: int, stream: int) -> np.ndarray:
    mask = 0xFFFFFFFFFFFFFFFF
    start = (seed + (stream + 1) * 0x9E3779B97F4A7C15) & mask
    return _mix64(np.array([start], dtype=_U64))


def _stream_words(seed: int, stream: int, positions: np.ndarray) -> np.ndarray:
    key = _stream_key(seed, stream)
    return _mix64(key + (positions.astype(_U64) + _U64(1)) * _GOLDEN)


def uniform_ints(seed: int, stream: int, count: int, bound: int) -> np.ndarray:
    """count uniform draws from [0, bound), bias-free via rejection."""
    if bound < 1 or bound >= 1 << 63:
        raise ValueError(f"bound must be in [1, 2^63), got {bound}")
    rem = (1 << 64) % bound
    threshold = _U64((1 << 64) - rem) if rem else None  # None: every word accepted
    out = np.zeros(count, dtype=np.int64)
    pending = np.arange(count)
    for attempt in range(_DRAW_BLOCK):
        pos = pending.astype(_U64) * _U64(_DRAW_BLOCK) + _U64(attempt)
        words = _stream_words(seed, stream, pos)
        ok = np.ones(words.size, dtype=bool) if threshold is None else words < threshold
        out[pending[ok]] = (words[ok] % _U64(bound)).astype(np.int64)
        pending = pending[~ok]
        if pending.size == 0:
            return out
    raise RuntimeError(f"rejection sampling exhausted {_DRAW_BLOCK} words for bound={bound}")


def residues_for_prime(seed: int, prime_rank: int, p: int, sample_indices: np.ndarray) -> np.ndarray:
    """Uniform residues mod p for the given samples, one substream per prime.

    ``prime_rank`` is the 0-based rank of p among all primes, which keeps
    the substream identity stable however the cutoff is chosen.
    """
    idx = np.asarray(sample_indices, dtype=np.int64)
    rem = (1 << 64) % p
    threshold = _U64((1 << 64) - rem) if rem else None  # None: every word accepted
    out = np.zeros(idx.size, dtype=np.int64)
    pending = np.arange(idx.size)
    for attempt in range(_DRAW_BLOCK):
        pos = idx[pending].astype(_U64) * _U64(_DRAW_BLOCK) + _U64(attempt)
        words = _stream_words(seed, prime_rank, pos)
        ok = np.ones(words.size, dtype=bool) if threshold is None else words < threshold
        out[pending[ok]] = (words[ok] % _U64(p)).astype(np.int64)
        pending = pending[~ok]
        if pending.size == 0:
            return out
    raise RuntimeError(f"rejection sampling exhausted {_DRAW_BLOCK} words for p={p}")


def mertens_product(w: int, table: PrimeTable) -> float:
    """prod_{p <= w} (1 - 1/p)."""
    if w > table.limit:
        raise BoundsError(f"w={w} exceeds table limit {table.limit}")
    hi = int(np.searchsorted(table.primes, w, side="right"))
    ps = table.primes[:hi].astype(np.float64)
    return float(np.exp(np.sum(np.log1p(-1.0 / ps).astype(_LD))))


def sieve_cutoff(x: float, table: PrimeTable) -> int:
    """Smallest prime z at which prod_{p<=z}(1 - 1/p) first drops to <= 1/log x.

    The product is decreasing, so this z is the unique prime where the
    threshold is crossed; the previous prime's product still exceeds it.
    """
    x = float(x)
    if x < 10:
        raise ValueError(f"x must be >= 10, got {x}")
    target = 1.0 / math.log(x)
    chunk = 4096
    carry = _LD(1.0)
    for a in range(0, table.primes.size, chunk):
        ps = table.primes[a : a + chunk].astype(np.float64)
        cum = carry * np.cumprod((1.0 - 1.0 / ps).astype(_LD))
        hits = np.flatnonzero(cum <= _LD(target))
        if hits.size:
            return int(table.primes[a + hits[0]])
        carry = cum[-1]
    raise BoundsError(
        f"table limit {table.limit} too small to reach the Mertens threshold for x={x}"
    )


@dataclass(frozen=True)
class ModelConfig:
    """Window and cutoff parameters of one model instance.

    Built from a scale via :meth:`from_scale`; direct construction is for
    edge cases (window_len 0, hand-picked cutoffs) and skips the Mertens
    consistency check.
    """

    x: float
    lam: float
    window_len: int
    cutoff_z: int
    seed: int = 0

    @classmethod
    def from_scale(cls, x: float, lam: float, table: PrimeTable, seed: int = 0) -> "ModelConfig":
        x = float(x)
        if lam <= 0:
            raise ValueError(f"lambda must be positive, got {lam}")
        window_len = int(round(lam * math.log(x)))
        if window_len < 1:
            raise ValueError(
                f"lambda log x rounds to {window_len}; construct ModelConfig directly for empty windows"
            )
        z = sieve_cutoff(x, table)
        return cls(x=x, lam=float(lam), window_len=window_len, cutoff_z=z, seed=int(seed))


def _primes_upto_w(table: PrimeTable, w: int) -> np.ndarray:
    hi = int(np.searchsorted(table.primes, w, side="right"))
    return table.primes[:hi]


@dataclass
class SiftedSample:
    """One realization: the drawn residues and the surviving offsets."""

    residues: dict[int, int]
    survivors: np.ndarray
    w: int
    window_len: int
    sample_index: int
    seed: int

    @property
    def size(self) -> int:
        return int(self.survivors.size)


def draw_sample(
    config: ModelConfig, w: int | None = None, table: PrimeTable | None = None,
    sample_index: int = 0,
) -> SiftedSample:
    """Materialize one sample: residues for every p <= w and the sifted set."""
    if table is None:
        raise ValueError("a prime table is required")
    if w is None:
        w = config.cutoff_z
    if w > config.cutoff_z:
        raise ValueError(f"w={w} exceeds the configured cutoff {config.cutoff_z}")
    primes = _primes_upto_w(table, w)
    idx = np.array([sample_index], dtype=np.int64)
    residues: dict[int, int] = {}
    alive = np.ones(config.window_len, dtype=bool)
    h = np.arange(1, config.window_len + 1, dtype=np.int64)
    for rank, p in enumerate(primes):
        p = int(p)
        a = int(residues_for_prime(config.seed, rank, p, idx)[0])
        residues[p] = a
        alive &= (h % p) != a
    return SiftedSample(
        residues=residues,
        survivors=h[alive],
        w=int(w),
        window_len=config.window_len,
        sample_index=sample_index,
        seed=config.seed,
    )


def membership_probability(tup, w: int, table: PrimeTable) -> float:
    """Exact survival probability prod_{p <= w} (1 - nu(p)/p), in log space."""
    if tup.k and w < tup.span:
        raise ValueError(f"w={w} below tuple span {tup.span}")
    if tup.k == 0:
        return 1.0
    primes = _primes_upto_w(table, w)
    if primes.size == 0:
        return 1.0
    span = tup.span
    cut = int(np.searchsorted(primes, max(span, tup.k), side="right"))
    total = _LD(0.0)
    for p in primes[:cut]:
        p = int(p)
        v = len({h % p for h in tup.offsets})
        if v == p:
            return 0.0
        total += _LD(math.log1p(-v / p))
    big = primes[cut:].astype(np.float64)
    if big.size:
        total += np.sum(np.log1p(-tup.k / big).astype(_LD))
    return float(np.exp(total))


def survivor_counts(
    config: ModelConfig,
    samples: int,
    table: PrimeTable,
    w_marks: list[int] | None = None,
    sample_start: int = 0,
    workers: int = 1,
) -> np.ndarray:
    """Survivor-count matrix, one row per mark in w_marks, columns = samples.

    Each entry [i, j] is the sifted-set size of absolute sample index
    sample_start + j after removing residue classes for all p <= w_marks[i].
    Results depend only on (seed, sample index), never on chunking.
    """
    marks = sorted(set(int(w) for w in (w_marks or [config.cutoff_z])))
    if marks[-1] > config.cutoff_z:
        raise ValueError(f"w marks exceed cutoff {config.cutoff_z}")
    L = config.window_len
    out = np.zeros((len(marks), samples), dtype=np.int64)
    if samples <= 0:
        return out

    spans = _worker_spans(samples, workers)

    def run(lo: int, hi: int) -> np.ndarray:
        idx = np.arange(sample_start + lo, sample_start + hi, dtype=np.int64)
        alive = np.ones((idx.size, L), dtype=bool)
        h = np.arange(1, L + 1, dtype=np.int64)
        res = np.zeros((len(marks), idx.size), dtype=np.int64)
        primes = _primes_upto_w(table, marks[-1])
        mi = 0
        for rank, p in enumerate(primes):
            p = int(p)
            while mi < len(marks) and marks[mi] < p:
                res[mi] = alive.sum(axis=1)
                mi += 1
            a = residues_for_prime(config.seed, rank, p, idx)
            if L:
                alive &= (h[None, :] % p) != a[:, None]
        while mi < len(marks):
            res[mi] = alive.sum(axis=1)
            mi += 1
        return res

    if len(spans) == 1 or workers <= 1:
        for lo, hi in spans:
            out[:, lo:hi] = run(lo, hi)
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            for (lo, hi), res in zip(spans, pool.map(lambda s: run(*s), spans)):
                out[:, lo:hi] = res
    return out


def _worker_spans(samples: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, int(workers))
    step = (samples + workers - 1) // workers
    return [(lo, min(lo + step, samples)) for lo in range(0, samples, step)]


@dataclass(frozen=True)
class MomentReport:
    """Sample moments of the survivor count against their predictions."""

    w: int
    sample_count: int
    mean: float
    variance: float
    predicted_mean: float
    predicted_variance_bound: float
    in_lemma_range: bool

    @property
    def mean_stderr(self) -> float:
        return math.sqrt(self.variance / self.sample_count)


def moments(
    config: ModelConfig,
    w: int,
    samples: int,
    table: PrimeTable,
    c_var: float | None = None,
    workers: int = 1,
    allow_out_of_range: bool = False,
    sample_start: int = 0,
) -> MomentReport:
    """Monte Carlo mean/variance of the survivor count at level w.

    The variance bound constant defaults to the checked-in calibration
    fixture. Levels outside [window_len, cutoff] are rejected unless
    ``allow_out_of_range`` (the report records the flag either way).
    """
    if samples < 1000:
        raise ValueError(f"need at least 1000 samples, got {samples}")
    in_range = config.window_len <= w <= config.cutoff_z
    if not in_range and not allow_out_of_range:
        raise BoundsError(
            f"w={w} outside lemma range [{config.window_len}, {config.cutoff_z}]; "
            "pass allow_out_of_range=True to compute anyway"
        )
    if c_var is None:
        from .calibration import load_fixture

        c_var = float(load_fixture()["model"]["c_var"])
    sizes = survivor_counts(config, samples, table, [w], sample_start, workers)[0]
    mean = float(sizes.mean())
    var = float(sizes.var(ddof=1)) if samples > 1 else 0.0
    pred_mean = config.window_len * mertens_product(w, table)
    bound = c_var * config.window_len / math.log(w) if config.window_len else 0.0
    return MomentReport(
        w=int(w),
        sample_count=samples,
        mean=mean,
        variance=var,
        predicted_mean=pred_mean,
        predicted_variance_bound=bound,
        in_lemma_range=in_range,
    )


def parity_bias(
    config: ModelConfig,
    samples: int,
    table: PrimeTable,
    workers: int = 1,
    sample_start: int = 0,
) -> float:
    """Monte Carlo estimate of the mean of (-1)^(survivor count) at the cutoff."""
    if samples < 10_000:
        raise ValueError(f"need at least 10000 samples, got {samples}")
    sizes = survivor_counts(config, samples, table, None, sample_start, workers)[0]
    odd = int(np.count_nonzero(sizes & 1))
    # same exact rational as binomial_moment_sum, so the r >= max(S)
    # collapse identity holds bit for bit
    return float(Fraction(samples - 2 * odd, samples))


def parity_bias_stderr(estimate: float, samples: int) -> float:
    return math.sqrt(max(1.0 - estimate * estimate, 0.0) / samples)


@dataclass(frozen=True)
class BonferroniBound:
    """Truncated binomial expansion sum_{k<=r} (phase-1)^k C(N, k).

    For phase -1 the value is an integer and ``side`` records whether it
    bounds (-1)^N from above (r even) or below (r odd); the bound is exact
    once r >= N.
    """

    value: int | float | complex
    side: str | None
    exact: bool


def bonferroni_bound(N: int, r: int, phase: complex = -1.0) -> BonferroniBound:
    N, r = int(N), int(r)
    if N < 0 or r < 0:
        raise ValueError("N and r must be non-negative")
    top = min(r, N)
    if phase == -1:
        value = sum((-2) ** k * math.comb(N, k) for k in range(top + 1))
        return BonferroniBound(value=value, side="upper" if r % 2 == 0 else "lower", exact=r >= N)
    z = complex(phase) - 1.0
    value = sum(z**k * math.comb(N, k) for k in range(top + 1))
    return BonferroniBound(value=value, side=None, exact=r >= N)


def binomial_moment_sum(
    config: ModelConfig,
    r: int,
    samples: int,
    table: PrimeTable,
    workers: int = 1,
    sample_start: int = 0,
) -> float:
    """Monte Carlo estimate of sum_{k<=r} (-2)^k E C(S, k).

    Evaluated per sample through the exact truncated expansion (integer
    arithmetic), then averaged, so no cancellation occurs across samples;
    means too large for float64 come back as +/-inf.
    """
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    if samples < 1000:
        raise ValueError(f"need at least 1000 samples, got {samples}")
    sizes = survivor_counts(config, samples, table, None, sample_start, workers)[0]
    counts = np.bincount(sizes)
    total = sum(
        int(c) * bonferroni_bound(s, r).value for s, c in enumerate(counts) if c
    )
    try:
        return float(Fraction(total, samples))
    except OverflowError:
        return math.inf if total > 0 else -math.inf


def exact_parity_bias(config: ModelConfig, table: PrimeTable, combo_limit: int = 10**7) -> float:
    """Mean of (-1)^(survivor count) by full enumeration of residue tuples.

    Only feasible for small cutoffs: the state space is the product of all
    primes up to the cutoff.
    """
    primes = [int(p) for p in _primes_upto_w(table, config.cutoff_z)]
    n_combos = 1
    for p in primes:
        n_combos *= p
    if n_combos > combo_limit:
        raise ValueError(f"{n_combos} residue combinations exceed limit {combo_limit}")
    if not primes:
        return 1.0 if config.window_len % 2 == 0 else -1.0

    grids = np.indices(primes).reshape(len(primes), -1)
    sizes = np.zeros(n_combos, dtype=np.int64)
    for h in range(1, config.window_len + 1):
        alive = np.ones(n_combos, dtype=bool)
        for j, p in enumerate(primes):
            alive &= grids[j] != (h % p)
        sizes += alive
    signs_total = n_combos - 2 * int(np.count_nonzero(sizes & 1))
    return float(Fraction(signs_total, n_combos))
