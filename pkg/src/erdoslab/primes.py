"""Prime generation, caching, and rank queries.

The central object is :class:`PrimeTable`: every prime up to a limit,
built by a segmented odd-only sieve of Eratosthenes, with O(log) rank
queries (``pi``, ``nth_prime``, ``gap``) and a binary cache format for
instant reloads of large tables.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .errors import BoundsError

MAGIC = b"PRIMECACHE1"

# Odd-number bits per sieving segment; 2**20 bits = 128 KiB keeps the
# inner marking loop L2-resident. Must stay a multiple of 8 so every
# non-final segment packs to whole bytes.
SEGMENT_BITS = 1 << 20

# Rank checkpoints are sampled every 2**16 integers.
CHECKPOINT_SHIFT = 16


def small_sieve(limit: int) -> np.ndarray:
    """Dense sieve returning all primes <= limit as an int64 array.

    Used for base primes and by modules that only need a modest prime
    list without a full PrimeTable.
    """
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_comp = np.zeros(limit + 1, dtype=bool)
    is_comp[:2] = True
    for p in range(2, int(limit**0.5) + 1):
        if not is_comp[p]:
            is_comp[p * p :: p] = True
    return np.flatnonzero(~is_comp).astype(np.int64)


def _odd_count(limit: int) -> int:
    # odds in [3, limit]
    return (limit - 1) // 2 if limit >= 3 else 0


class PrimeTable:
    """Immutable table of all primes <= ``limit``.

    Attributes
    ----------
    limit : int
        Inclusive sieving bound.
    primes : numpy.ndarray
        Strictly increasing int64 array of every prime <= limit.
    """

    def __init__(self, limit: int, primes: np.ndarray, odd_composite_bits: np.ndarray):
        self.limit = int(limit)
        self.primes = primes
        # Packed little-endian bitset; bit i <-> integer 2i+3, set <=> composite.
        self._bits = odd_composite_bits
        self._checkpoints = self._build_checkpoints()

    def _build_checkpoints(self) -> np.ndarray:
        n_blocks = (self.limit >> CHECKPOINT_SHIFT) + 2
        edges = (np.arange(n_blocks, dtype=np.int64)) << CHECKPOINT_SHIFT
        return np.searchsorted(self.primes, edges, side="right").astype(np.int64)

    # -- rank queries ------------------------------------------------

    def pi(self, x: int) -> int:
        """Number of primes <= x. O(log) via checkpoint plus local search."""
        x = int(x)
        if x > self.limit:
            raise BoundsError(f"pi({x}) exceeds table limit {self.limit}")
        if x < 2:
            return 0
        j = x >> CHECKPOINT_SHIFT
        lo, hi = self._checkpoints[j], self._checkpoints[j + 1]
        return int(lo + np.searchsorted(self.primes[lo:hi], x, side="right"))

    def nth_prime(self, n: int) -> int:
        """The n-th prime, 1-indexed (nth_prime(1) == 2)."""
        n = int(n)
        if not 1 <= n <= self.primes.size:
            raise BoundsError(f"n={n} outside [1, {self.primes.size}]")
        return int(self.primes[n - 1])

    def gap(self, n: int) -> int:
        """Gap following the n-th prime: p_{n+1} - p_n."""
        n = int(n)
        if not 1 <= n + 1 <= self.primes.size:
            raise BoundsError(f"gap index n={n} needs n+1 <= {self.primes.size}")
        return int(self.primes[n] - self.primes[n - 1])

    def __contains__(self, v: int) -> bool:
        v = int(v)
        if v > self.limit:
            raise BoundsError(f"{v} exceeds table limit {self.limit}")
        if v < 2:
            return False
        if v == 2:
            return True
        if v % 2 == 0:
            return False
        i = (v - 3) >> 1
        return not bool(self._bits[i >> 3] >> (i & 7) & 1)

    # -- windowed access ----------------------------------------------

    def _unpack(self, i0: int, i1: int) -> np.ndarray:
        """Composite flags for odd-index range [i0, i1)."""
        if i0 >= i1:
            return np.zeros(0, dtype=bool)
        b0, b1 = i0 >> 3, (i1 + 7) >> 3
        bits = np.unpackbits(self._bits[b0:b1], bitorder="little")
        off = i0 - (b0 << 3)
        return bits[off : off + (i1 - i0)].astype(bool)

    def is_prime_range(self, lo: int, hi: int) -> np.ndarray:
        """Boolean primality for every integer in [lo, hi)."""
        lo, hi = int(lo), int(hi)
        if lo < 0 or hi > self.limit + 1:
            raise BoundsError(f"window [{lo},{hi}) outside [0, {self.limit + 1})")
        out = np.zeros(max(hi - lo, 0), dtype=bool)
        if hi <= lo:
            return out
        if lo <= 2 < hi:
            out[2 - lo] = True
        v0 = max(lo | 1, 3)  # first odd >= max(lo, 3)
        if v0 >= hi:
            return out
        v1 = (hi - 1) if (hi - 1) % 2 else hi - 2  # last odd < hi
        i0, i1 = (v0 - 3) >> 1, ((v1 - 3) >> 1) + 1
        out[v0 - lo :: 2] = ~self._unpack(i0, i1)
        return out

    # -- cache file ----------------------------------------------------

    def save(self, path: str | Path) -> Path:
        """Write the cache file; format is MAGIC, <Q limit, packed bitset."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<Q", self.limit))
            fh.write(self._bits.tobytes())
        return path


def build_table(limit: int, segment_bits: int = SEGMENT_BITS) -> PrimeTable:
    """Sieve all primes <= limit with O(segment) working memory.

    Parameters
    ----------
    limit : int
        Inclusive upper bound, at least 2.
    segment_bits : int
        Odd-number bits per segment; multiple of 8.
    """
    limit = int(limit)
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    if segment_bits % 8:
        raise ValueError("segment_bits must be a multiple of 8")

    n_bits = _odd_count(limit)
    base = small_sieve(int(limit**0.5) + 1)
    base_odd = base[base > 2]

    packed_parts: list[np.ndarray] = []
    prime_parts: list[np.ndarray] = [np.array([2], dtype=np.int64)]

    for i0 in range(0, max(n_bits, 1), segment_bits):
        i1 = min(i0 + segment_bits, n_bits)
        if i1 <= i0:
            break
        seg = np.zeros(i1 - i0, dtype=bool)  # True <=> composite
        seg_lo = 2 * i0 + 3
        seg_hi = 2 * (i1 - 1) + 3
        for p in base_odd:
            p = int(p)
            if p * p > seg_hi:
                break
            start = max(p * p, ((seg_lo + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start > seg_hi:
                continue
            # consecutive odd multiples of p sit p odd-indices apart
            seg[(start - 3) // 2 - i0 :: p] = True
        prime_parts.append((2 * (i0 + np.flatnonzero(~seg)) + 3).astype(np.int64))
        packed_parts.append(np.packbits(seg, bitorder="little"))

    if packed_parts:
        bits = np.concatenate(packed_parts)
    else:
        bits = np.zeros(0, dtype=np.uint8)
    primes = np.concatenate(prime_parts)
    return PrimeTable(limit, primes, bits)


def load_table(path: str | Path) -> PrimeTable:
    """Load a PrimeTable from its cache file."""
    path = Path(path)
    raw = path.read_bytes()
    if raw[: len(MAGIC)] != MAGIC:
        raise ValueError(f"{path} is not a prime cache file (bad magic)")
    (limit,) = struct.unpack_from("<Q", raw, len(MAGIC))
    limit = int(limit)
    bits = np.frombuffer(raw[len(MAGIC) + 8 :], dtype=np.uint8)
    n_bits = _odd_count(limit)
    if bits.size != (n_bits + 7) // 8:
        raise ValueError(f"{path}: bitset length {bits.size} inconsistent with limit {limit}")

    prime_parts = [np.array([2], dtype=np.int64)] if limit >= 2 else []
    chunk = 1 << 23
    for i0 in range(0, n_bits, chunk):
        i1 = min(i0 + chunk, n_bits)
        b = np.unpackbits(bits[i0 >> 3 : (i1 + 7) >> 3], bitorder="little")[: i1 - i0]
        prime_parts.append((2 * (i0 + np.flatnonzero(b == 0)) + 3).astype(np.int64))
    primes = np.concatenate(prime_parts) if prime_parts else np.zeros(0, dtype=np.int64)
    return PrimeTable(limit, primes, bits.copy())


def cache_path(limit: int, cache_dir: str | Path | None = None) -> Path:
    """Cache file location; ERDOS_CACHE_DIR overrides the default directory."""
    d = cache_dir or os.environ.get("ERDOS_CACHE_DIR") or Path.home() / ".cache" / "erdoslab"
    return Path(d) / f"primes-{int(limit)}.bin"


def load_or_build(limit: int, cache_dir: str | Path | None = None, write: bool = True) -> PrimeTable:
    """Return a table for ``limit``, reusing the on-disk cache when present."""
    path = cache_path(limit, cache_dir)
    if path.exists():
        table = load_table(path)
        if table.limit == int(limit):
            return table
    table = build_table(limit)
    if write:
        table.save(path)
    return table
