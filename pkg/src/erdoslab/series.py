"""Checkpointed partial sums of alternating (and unit-phase) prime series.

Two families are covered: the index-weighted series sum phase^n * n / p_n
and the counting-parity series sum phase^pi(m) / (m log m), together with
pairwise averaging of consecutive partial sums and a numerical check that
the two series track each other up to a constant.

Accumulation is compensated: chunk prefixes are carried in extended
precision and every checkpoint stores the float64 value plus the residual
(compensation) beyond it, so downstream consumers can reconstruct the sum
to better than float64.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import BoundsError, DivergentSeriesError
from .primes import PrimeTable

# Phase powers are renormalized to |z| = 1 after this many multiplications;
# it is also the chunk length for complex-phase scans.
RENORM_STEPS = 1 << 16

# Real-phase scans carry exact signs, so larger chunks are safe.
_REAL_CHUNK = 1 << 20

_LD = np.longdouble


def _as_phase(phase: complex) -> complex:
    z = complex(phase)
    if abs(abs(z) - 1.0) > 1e-9:
        raise ValueError(f"phase must lie on the unit circle, got |z|={abs(z)!r}")
    return z


@dataclass
class PartialSumTrace:
    """Partial sums of a series recorded at checkpoint indices.

    ``values[k]`` is the float64 partial sum at ``indices[k]`` and
    ``compensations[k]`` the residual beyond float64; value + compensation
    reconstructs the extended-precision sum.
    """

    indices: np.ndarray
    values: np.ndarray
    compensations: np.ndarray
    phase: complex
    start_index: int
    abs_term_total: float = 0.0

    def __len__(self) -> int:
        return int(self.indices.size)

    def value_at(self, index: int) -> complex:
        k = np.searchsorted(self.indices, index)
        if k >= self.indices.size or self.indices[k] != index:
            raise ValueError(f"index {index} is not a checkpoint of this trace")
        return complex(self.values[k])

    @property
    def final_value(self) -> complex:
        return complex(self.values[-1])

    def is_real(self) -> bool:
        return self.phase.imag == 0.0

    def _rows(self):
        real = self.is_real()
        for i, v, c in zip(self.indices, self.values, self.compensations):
            comp = c.real if real else abs(c)
            yield int(i), v.real, v.imag, comp

    def to_csv(self, path: str | Path, header: str | None = None) -> Path:
        path = Path(path)
        with open(path, "w") as fh:
            if header:
                fh.write(f"# {header}\n")
            fh.write("index,value_re,value_im,compensation\n")
            for i, re, im, comp in self._rows():
                fh.write(f"{i},{re!r},{im!r},{comp!r}\n")
        return path

    def to_json(self, path: str | Path, header: str | None = None) -> Path:
        path = Path(path)
        rows = [
            {"index": i, "value_re": re, "value_im": im, "compensation": comp}
            for i, re, im, comp in self._rows()
        ]
        doc = {"header": header, "rows": rows}
        path.write_text(json.dumps(doc, indent=1) + "\n")
        return path


def checkpoint_indices(
    start: int,
    stop: int,
    ratio: float = 1.25,
    dense_windows: tuple[tuple[int, int], ...] = (),
    explicit: np.ndarray | None = None,
) -> np.ndarray:
    """Geometric checkpoints from start to stop plus dense unit-step windows."""
    if stop < start:
        raise ValueError(f"stop={stop} precedes start={start}")
    marks = set()
    if explicit is not None:
        for i in np.asarray(explicit, dtype=np.int64):
            if not start <= i <= stop:
                raise ValueError(f"explicit checkpoint {i} outside [{start}, {stop}]")
            marks.add(int(i))
    else:
        c = start
        while c < stop:
            marks.add(c)
            c = max(c + 1, int(math.ceil(c * ratio)))
    marks.add(stop)
    for lo, hi in dense_windows:
        lo, hi = max(int(lo), start), min(int(hi), stop)
        marks.update(range(lo, hi + 1))
    return np.array(sorted(marks), dtype=np.int64)


class _CompensatedScan:
    """Shared accumulation core for the series scans.

    Terms arrive in chunks (real or complex float64); prefixes inside a
    chunk are accumulated as extended-precision cumulative sums and the
    running cross-chunk total is carried in extended precision as well.
    """

    def __init__(self, checkpoints: np.ndarray, complex_valued: bool):
        self.checkpoints = checkpoints
        self.complex_valued = complex_valued
        self.total_re = _LD(0.0)
        self.total_im = _LD(0.0)
        self.abs_total = _LD(0.0)
        self._next = 0  # position in checkpoints
        self.out_values = np.zeros(checkpoints.size, dtype=np.complex128)
        self.out_comp = np.zeros(checkpoints.size, dtype=np.complex128)

    def feed(self, first_index: int, terms: np.ndarray) -> None:
        n = terms.size
        last_index = first_index + n - 1
        if self.complex_valued:
            pre_re = np.cumsum(terms.real.astype(_LD))
            pre_im = np.cumsum(terms.imag.astype(_LD))
        else:
            pre_re = np.cumsum(terms.astype(_LD))
            pre_im = None
        self.abs_total += np.abs(terms).astype(_LD).sum()

        while self._next < self.checkpoints.size and self.checkpoints[self._next] <= last_index:
            c = int(self.checkpoints[self._next])
            off = c - first_index
            re = self.total_re + pre_re[off]
            im = self.total_im + (pre_im[off] if pre_im is not None else _LD(0.0))
            v = complex(float(re), float(im))
            self.out_values[self._next] = v
            self.out_comp[self._next] = complex(float(re - _LD(v.real)), float(im - _LD(v.imag)))
            self._next += 1

        self.total_re += pre_re[-1]
        if pre_im is not None:
            self.total_im += pre_im[-1]

    def finish(self, phase: complex, start_index: int) -> PartialSumTrace:
        if self._next != self.checkpoints.size:
            raise AssertionError("scan ended before all checkpoints were reached")
        return PartialSumTrace(
            indices=self.checkpoints,
            values=self.out_values,
            compensations=self.out_comp,
            phase=phase,
            start_index=start_index,
            abs_term_total=float(self.abs_total),
        )


def _phase_powers(phase: complex, carry: complex, count: int) -> tuple[np.ndarray, complex]:
    """carry * phase^(1..count) by repeated multiplication; renormalized carry out."""
    pw = carry * np.cumprod(np.full(count, phase, dtype=np.complex128))
    nxt = complex(pw[-1])
    nxt /= abs(nxt)
    return pw, nxt


def erdos_partial(
    table: PrimeTable,
    n_max: int,
    phase: complex = -1.0,
    *,
    checkpoints: np.ndarray | None = None,
    dense_windows: tuple[tuple[int, int], ...] = (),
    ratio: float = 1.25,
    require_convergent: bool = False,
) -> PartialSumTrace:
    """Partial sums of sum_{n<=N} phase^n * n / p_n at checkpointed N.

    Parameters
    ----------
    table : PrimeTable
        Must satisfy n_max <= pi(table.limit).
    n_max : int
        Largest summation index.
    phase : complex
        Unit phase z; the classic alternating series is z = -1.
    checkpoints, dense_windows, ratio
        Checkpoint layout; explicit ``checkpoints`` override the geometric
        grid, ``dense_windows`` add unit-step runs either way.
    require_convergent : bool
        Reject phase 1, whose partial sums grow without bound.
    """
    phase = _as_phase(phase)
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if n_max > table.primes.size:
        raise BoundsError(f"n_max={n_max} exceeds pi(limit)={table.primes.size}")
    if require_convergent and phase == 1:
        raise DivergentSeriesError(
            "phase 1 makes the terms n/p_n ~ 1/log n, whose partial sums diverge"
        )

    cps = checkpoint_indices(1, n_max, ratio, dense_windows, checkpoints)
    real = phase.imag == 0.0 and phase.real in (1.0, -1.0)
    scan = _CompensatedScan(cps, complex_valued=not real)
    chunk = _REAL_CHUNK if real else RENORM_STEPS
    carry = 1.0 + 0.0j  # phase^(a-1) entering the next chunk

    for a in range(1, n_max + 1, chunk):
        b = min(a + chunk, n_max + 1)
        n = np.arange(a, b, dtype=np.float64)
        base = n / table.primes[a - 1 : b - 1]
        if real:
            if phase.real == -1.0:
                base[(np.arange(a, b) & 1) == 1] *= -1.0
            scan.feed(a, base)
        else:
            pw, carry = _phase_powers(phase, carry, b - a)
            scan.feed(a, pw * base)
    return scan.finish(phase, 1)


def parity_partial(
    table: PrimeTable,
    m_max: int,
    phase: complex = -1.0,
    *,
    checkpoints: np.ndarray | None = None,
    dense_windows: tuple[tuple[int, int], ...] = (),
    ratio: float = 1.25,
) -> PartialSumTrace:
    """Partial sums of sum_{2<=m<=M} phase^pi(m) / (m log m), natural log."""
    phase = _as_phase(phase)
    m_max = int(m_max)
    if m_max < 2:
        raise ValueError(f"m_max must be >= 2, got {m_max}")
    if m_max > table.limit:
        raise BoundsError(f"m_max={m_max} exceeds table limit {table.limit}")

    cps = checkpoint_indices(2, m_max, ratio, dense_windows, checkpoints)
    real = phase.imag == 0.0 and phase.real in (1.0, -1.0)
    scan = _CompensatedScan(cps, complex_valued=not real)
    chunk = _REAL_CHUNK if real else RENORM_STEPS
    parity_carry = 0  # pi(a-1) mod 2
    carry_pw = 1.0 + 0.0j  # phase^pi(a-1)

    for a in range(2, m_max + 1, chunk):
        b = min(a + chunk, m_max + 1)
        m = np.arange(a, b, dtype=np.float64)
        base = 1.0 / (m * np.log(m))
        ind = table.is_prime_range(a, b)
        if real and phase.real == -1.0:
            par = np.bitwise_xor.accumulate(ind.astype(np.uint8)) ^ parity_carry
            base[par == 1] *= -1.0
            parity_carry = int(par[-1])
            scan.feed(a, base)
        elif real:
            scan.feed(a, base)
        else:
            step = np.where(ind, phase, 1.0 + 0.0j)
            pw = carry_pw * np.cumprod(step)
            carry_pw = complex(pw[-1])
            carry_pw /= abs(carry_pw)
            scan.feed(a, pw * base)
    return scan.finish(phase, 2)


def average_consecutive(trace: PartialSumTrace) -> PartialSumTrace:
    """Average consecutive partial sums: checkpoint k becomes (S_k + S_{k+1})/2.

    Operates on every unit-step run of the trace; raises if the trace has
    no adjacent checkpoint pair (too sparse to average).
    """
    if len(trace) < 2:
        raise ValueError("trace too short to average")
    adj = np.diff(trace.indices) == 1
    if not adj.any():
        raise ValueError("trace has no unit-step checkpoints; request a dense window")
    idx = trace.indices[:-1][adj]
    vals = (trace.values[:-1][adj] + trace.values[1:][adj]) / 2.0
    comp = (trace.compensations[:-1][adj] + trace.compensations[1:][adj]) / 2.0
    return PartialSumTrace(
        indices=idx,
        values=vals,
        compensations=comp,
        phase=trace.phase,
        start_index=trace.start_index,
        abs_term_total=trace.abs_term_total,
    )


@dataclass
class EquivalenceReport:
    """Side-by-side values of the two series at matched scales.

    ``lhs[i]`` is sum_{n<=x_i} z^n n/p_n, ``rhs[i]`` is
    (z/(z-1)) * sum_{2<=m<=x_i log x_i} z^pi(m)/(m log m); their
    differences should stabilize toward a constant as x grows.
    """

    x_values: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    differences: np.ndarray = field(init=False)
    phase: complex = -1.0

    def __post_init__(self):
        self.differences = self.lhs - self.rhs

    def max_pairwise_spread(self, top_half: bool = True) -> float:
        d = self.differences[self.x_values.size // 2 :] if top_half else self.differences
        return float(max(abs(a - b) for a in d for b in d))

    def consecutive_spreads(self) -> np.ndarray:
        return np.abs(np.diff(self.differences))

    def to_csv(self, path: str | Path, header: str | None = None) -> Path:
        path = Path(path)
        with open(path, "w") as fh:
            if header:
                fh.write(f"# {header}\n")
            fh.write("x,lhs_re,lhs_im,rhs_re,rhs_im,diff_re,diff_im\n")
            for x, l, r, d in zip(self.x_values, self.lhs, self.rhs, self.differences):
                fh.write(f"{int(x)},{l.real!r},{l.imag!r},{r.real!r},{r.imag!r},{d.real!r},{d.imag!r}\n")
        return path

    def to_json(self, path: str | Path, header: str | None = None) -> Path:
        rows = [
            {
                "x": int(x),
                "lhs_re": l.real, "lhs_im": l.imag,
                "rhs_re": r.real, "rhs_im": r.imag,
                "diff_re": d.real, "diff_im": d.imag,
            }
            for x, l, r, d in zip(self.x_values, self.lhs, self.rhs, self.differences)
        ]
        Path(path).write_text(json.dumps({"header": header, "rows": rows}, indent=1) + "\n")
        return Path(path)


def verify_equivalence(
    table: PrimeTable, x_values: list[int], phase: complex = -1.0
) -> EquivalenceReport:
    """Evaluate both series at matched scales x and M = floor(x log x)."""
    phase = _as_phase(phase)
    if phase == 1:
        raise ValueError("phase 1 has no finite comparison constant; both sides diverge")
    xs = np.array(sorted(set(int(x) for x in x_values)), dtype=np.int64)
    if xs.size == 0 or xs[0] < 2:
        raise ValueError("x_values must be integers >= 2")
    ms = np.array([int(x * math.log(x)) for x in xs], dtype=np.int64)
    if ms[-1] > table.limit:
        raise BoundsError(
            f"need m up to {ms[-1]} > table limit {table.limit}; rebuild with a larger table"
        )
    if xs[-1] > table.primes.size:
        raise BoundsError(f"need p_{xs[-1]} but table holds only {table.primes.size} primes")

    lhs_trace = erdos_partial(table, int(xs[-1]), phase, checkpoints=xs)
    rhs_trace = parity_partial(table, int(ms[-1]), phase, checkpoints=np.unique(ms))
    factor = phase / (phase - 1.0)
    lhs = np.array([lhs_trace.value_at(int(x)) for x in xs])
    rhs = factor * np.array([rhs_trace.value_at(int(m)) for m in ms])
    report = EquivalenceReport(x_values=xs, lhs=lhs, rhs=rhs, phase=phase)
    # restore ordering the caller asked for is not needed; xs is sorted
    return report


def oscillation_stats(
    table: PrimeTable, n_lo: int, n_hi: int, phase: complex = -1.0
) -> tuple[float, float]:
    """Total variation of raw vs pairwise-averaged partial sums over [n_lo, n_hi].

    Returns (raw_tv, averaged_tv). Raw TV is sum |t_k|; averaged TV is
    sum |t_{k+1} + t_{k+2}| / 2, both accumulated term-wise without
    materializing dense traces.
    """
    phase = _as_phase(phase)
    n_lo, n_hi = int(n_lo), int(n_hi)
    if not 1 <= n_lo < n_hi:
        raise ValueError("need 1 <= n_lo < n_hi")
    if n_hi > table.primes.size:
        raise BoundsError(f"n_hi={n_hi} exceeds pi(limit)={table.primes.size}")

    raw = _LD(0.0)
    avg = _LD(0.0)
    prev_term: complex | None = None
    chunk = _REAL_CHUNK
    for a in range(n_lo + 1, n_hi + 1, chunk):
        b = min(a + chunk, n_hi + 1)
        n = np.arange(a, b, dtype=np.float64)
        base = n / table.primes[a - 1 : b - 1]
        if phase == -1:
            t = np.where((np.arange(a, b) & 1) == 1, -base, base).astype(np.complex128)
        elif phase == 1:
            t = base.astype(np.complex128)
        else:
            pw = np.power(phase, np.arange(a, b, dtype=np.float64))
            t = pw * base
        raw += np.abs(t).astype(_LD).sum()
        with_prev = np.empty(t.size + 1, dtype=np.complex128)
        with_prev[0] = prev_term if prev_term is not None else 0.0
        with_prev[1:] = t
        pair = np.abs(with_prev[1:] + with_prev[:-1]) / 2.0
        start = 0 if prev_term is not None else 1
        avg += pair[start:].astype(_LD).sum()
        prev_term = complex(t[-1])
    return float(raw), float(avg)
