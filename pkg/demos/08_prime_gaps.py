#!/usr/bin/env python3
"""Gap-driven series, small-gap counts, and the parity statistic on real primes."""

import math

from erdoslab import (
    GapSeriesConfig,
    build_table,
    dyadic_gap_stats,
    empirical_parity_statistic,
    gallagher_sum,
    gap_series_partial,
    small_gap_count,
)

LIMIT = 10**8
print(f"sieving to {LIMIT:,} ...")
table = build_table(LIMIT)

print()
print("gap series partial sums (n up to 10^6):")
for kind, kwargs in (
    ("alternating_gap", {}),
    ("alternating_weighted_gap", {}),
    ("reciprocal_weighted", {"c": 3.0}),
    ("reciprocal_weighted", {"c": 2.0}),
    ("theta_family", {"theta": 0.6}),
):
    cfg = GapSeriesConfig(kind=kind, **kwargs)
    tr = gap_series_partial(table, cfg, 10**6)
    label = kind + (f" (c={kwargs['c']:g})" if "c" in kwargs else "") + (
        f" (theta={kwargs['theta']:g})" if "theta" in kwargs else "")
    print(f"  {label:>34}: S(10^6) = {tr.final_value.real:+.6f}")
print("  (the alternating gap series has non-vanishing terms: gap 2 keeps recurring,")
print("   so its partial sums oscillate forever; no convergence is asserted)")

print()
stats = dyadic_gap_stats(table)
print(f"gap 2 appears in every dyadic index block: "
      f"{all(s.has_gap_two for s in stats)} ({len(stats)} blocks up to n = {stats[-1].n_hi:,})")

print()
print("small gaps in [X, 2X) vs the Gallagher-type main term:")
print(f"{'X':>10} {'lambda':>7} {'count':>9} {'main term':>10} {'density ratio':>14}")
for X, lam in ((10**5, 0.5), (10**6, 0.5), (10**7, 0.5), (10**7, 0.25)):
    rep = small_gap_count(table, X, lam)
    print(f"{X:>10,} {lam:>7} {rep.count:>9,} {rep.gallagher_main:>10.3f} {rep.density_ratio:>14.4f}")
M = int(0.5 * math.log(10**7))
print(f"(main term at X=1e7, lambda=0.5 equals gallagher_sum(2, {M}) = {gallagher_sum(2, M):.3f})")

print()
print("parity of the prime count in windows (n, n + floor(lambda log x)], x = 10^7:")
for lam in (0.5, 1.0, 2.0, 4.0):
    rep = empirical_parity_statistic(table, 10**7, lam, 100_000, seed=1)
    print(f"  lambda = {lam:g}: estimate {rep.estimate:+.5f} +/- {rep.stderr:.5f} "
          f"(e^-2lambda = {math.exp(-2 * lam):.5f}, window = {rep.window})")
