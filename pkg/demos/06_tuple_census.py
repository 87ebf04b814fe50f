#!/usr/bin/env python3
"""Exact tuple counts vs singular-series predictions at x = 10^6."""

from erdoslab import OffsetTuple, build_table, check_tuple, count_tuples, log_integral

X = 10**6
table = build_table(X + 100)

print(f"density integrals at x = {X:,}: ", end="")
print(", ".join(f"k={k}: {log_integral(X, k):.1f}" for k in (1, 2, 3)))
print()

battery = [
    [0],          # primes themselves
    [0, 2],       # twins
    [0, 4],
    [0, 6],       # sexy primes, double density
    [0, 2, 6],    # densest admissible triple
    [0, 2, 6, 8], # densest admissible quadruple
    [0, 1],       # non-admissible: prediction 0
    [0, 2, 4],    # non-admissible triple
]

print(f"{'tuple':>14} {'count':>8} {'prediction':>11} {'abs err':>8} {'count/pred':>10}")
for offs in battery:
    rep = check_tuple(table, OffsetTuple(offs), X)
    ratio = f"{rep.count / rep.prediction:.4f}" if rep.prediction else "--"
    print(f"{str(offs):>14} {rep.count:>8} {rep.prediction:>11.1f} {rep.abs_error:>8.1f} {ratio:>10}")

print()
print("normalized errors |count - prediction| / x^(1 - eps) at eps = 0.05:")
for offs in battery[:6]:
    rep = check_tuple(table, OffsetTuple(offs), X, epsilon=0.05)
    print(f"  {str(offs):>14}: {rep.normalized_error:.2e}")

print()
print("counts are exact bitset scans; {0} reduces to the prime count itself:")
print(f"  count_tuples({{0}}, 10^6) = {count_tuples(table, OffsetTuple([0]), X):,} = pi(10^6)")
