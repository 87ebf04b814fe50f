"""Exact prime-tuple counts against their density predictions.

count_tuples walks a bit-vector window and ANDs shifted primality slices,
log_integral evaluates the density integral int_2^x dy/log^k y by adaptive
Gauss-Kronrod bisection, and check_tuple packages both sides with a
normalized error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundsError
from .primes import PrimeTable
from .singular import OffsetTuple, SingularValue, singular_series

_COUNT_CHUNK = 1 << 22

# 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule.
_XGK = np.array([
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0,
])
_WGK = np.array([
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278,
])
_WG = np.array([
    0.1294849661688697, 0.2797053914892767,
    0.3818300505051189, 0.4179591836734694,
])


def count_tuples(table: PrimeTable, tup: OffsetTuple, x: int) -> int:
    """Number of n <= x with n + h prime for every offset h."""
    x = int(x)
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    if tup.k == 0:
        return x
    max_off = tup.offsets[-1]
    if x + max_off > table.limit:
        raise BoundsError(f"need primality up to {x + max_off} > table limit {table.limit}")

    total = 0
    for a in range(1, x + 1, _COUNT_CHUNK):
        b = min(a + _COUNT_CHUNK, x + 1)
        win = table.is_prime_range(a, b + max_off)
        acc = win[tup.offsets[0] : tup.offsets[0] + (b - a)]
        for h in tup.offsets[1:]:
            acc = acc & win[h : h + (b - a)]
        total += int(np.count_nonzero(acc))
    return total


def _gk15(f, a: float, b: float) -> tuple[float, float]:
    """Kronrod-15 estimate over [a, b] and |K15 - G7| as error proxy."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    xs = np.concatenate([c - h * _XGK[:-1], [c], c + h * _XGK[-2::-1]])
    fx = f(xs)
    w = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
    k15 = h * float(np.dot(w, fx))
    g_idx = np.array([1, 3, 5, 7, 9, 11, 13])
    wg = np.concatenate([_WG[:-1], [_WG[-1]], _WG[-2::-1]])
    g7 = h * float(np.dot(wg, fx[g_idx]))
    return k15, abs(k15 - g7)


def log_integral(x: float, k: int, rel_tol: float = 1e-10, abs_floor: float = 1e-14) -> float:
    """int_2^x dy / log(y)^k by adaptive bisection of a Gauss-Kronrod pair."""
    x = float(x)
    k = int(k)
    if x < 2:
        raise ValueError(f"x must be >= 2, got {x}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if x == 2.0:
        return 0.0

    def f(y):
        return np.log(y) ** (-float(k))

    import heapq

    i0, e0 = _gk15(f, 2.0, x)
    heap = [(-e0, 2.0, x, i0)]
    total, err = i0, e0
    for _ in range(20_000):
        if err <= max(abs_floor, rel_tol * abs(total)):
            return total
        neg_e, a, b, i_ab = heapq.heappop(heap)
        m = 0.5 * (a + b)
        i1, e1 = _gk15(f, a, m)
        i2, e2 = _gk15(f, m, b)
        total += (i1 + i2) - i_ab
        err += (e1 + e2) - (-neg_e)
        heapq.heappush(heap, (-e1, a, m, i1))
        heapq.heappush(heap, (-e2, m, b, i2))
    raise RuntimeError(f"quadrature failed to converge for x={x}, k={k}")


@dataclass(frozen=True)
class TupleCheckReport:
    """Both sides of the tuple-count estimate at one scale.

    ``normalized_error`` divides the absolute error by x^(1-epsilon); the
    in_*_range flags mark whether k <= (log log x)^5 and the offsets fit
    in [0, log^2 x], the window where the prediction is meaningful.
    """

    tup: OffsetTuple
    x: int
    count: int
    prediction: float
    abs_error: float
    normalized_error: float
    epsilon: float
    singular: SingularValue
    in_offset_range: bool
    in_k_range: bool


def check_tuple(
    table: PrimeTable,
    tup: OffsetTuple,
    x: int,
    epsilon: float = 0.05,
    strict_range: bool = False,
    truncation_prime: int | None = None,
) -> TupleCheckReport:
    """Exact count vs singular-series prediction with normalized error."""
    x = int(x)
    if x < 3:
        raise ValueError(f"x must be >= 3, got {x}")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must be in (0,1), got {epsilon}")
    if tup.k == 0:
        raise ValueError("tuple must have at least one offset")

    log2x = math.log(x) ** 2
    loglog5 = math.log(math.log(x)) ** 5
    in_offset_range = tup.offsets[-1] <= log2x
    in_k_range = tup.k <= loglog5
    if strict_range and not (in_offset_range and in_k_range):
        raise ValueError(
            f"tuple outside strict ranges at x={x}: offsets<=log^2 x is {in_offset_range}, "
            f"k<=(loglog x)^5 is {in_k_range}"
        )

    count = count_tuples(table, tup, x)
    sv = singular_series(tup, truncation_prime)
    prediction = sv.value * log_integral(x, tup.k) if sv.admissible else 0.0
    abs_error = abs(count - prediction)
    return TupleCheckReport(
        tup=tup,
        x=x,
        count=count,
        prediction=prediction,
        abs_error=abs_error,
        normalized_error=abs_error / x ** (1.0 - epsilon),
        epsilon=epsilon,
        singular=sv,
        in_offset_range=in_offset_range,
        in_k_range=in_k_range,
    )
