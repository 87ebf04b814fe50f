#!/usr/bin/env python3
"""Singular series of tuples: local densities, truncation error, Gallagher sums."""

from erdoslab import OffsetTuple, gallagher_sum, nu, pair_singular_table, singular_series

twin = OffsetTuple([0, 2])
print("residue counts nu(p) for the twin pattern {0, 2}:")
for p in (2, 3, 5, 7, 11):
    print(f"  nu({p}) = {nu(twin, p)}")

print()
sv = singular_series(twin, truncation_prime=10**6)
print(f"twin singular value (truncated at 10^6): {sv.value:.9f}")
print(f"certified multiplicative tail bound:     {sv.tail_bound:.2e}")
lo, hi = sv.interval()
print(f"the untruncated product lies in [{lo:.9f}, {hi:.9f}]")

print()
print("admissibility is a local obstruction: one fully covered prime kills the product")
for offs in ([0, 2], [0, 1], [0, 3], [0, 2, 6], [0, 2, 4]):
    s = singular_series(OffsetTuple(offs))
    tag = "admissible" if s.admissible else "NOT admissible (value exactly 0)"
    print(f"  {str(offs):>12}: value = {s.value:.6f}  {tag}")

print()
print("shift invariance: {0,2}, {5,7}, {100,102} share one value")
for offs in ([0, 2], [5, 7], [100, 102]):
    print(f"  {str(offs):>12}: {singular_series(OffsetTuple(offs)).value:.12f}")

print()
print("pair values by gap d (zero at odd d, spikes at smooth even d):")
vals = pair_singular_table(30)
for d in range(2, 31, 2):
    bar = "#" * int(20 * vals[d] / vals[2:31].max())
    print(f"  d = {d:>2}: {vals[d]:.4f} {bar}")

print()
print("Gallagher-type sums over tuple families in (0, H]:")
for k in (1, 2):
    for H in (10, 100, 1000):
        s = gallagher_sum(k, H)
        print(f"  k = {k}, H = {H:>4}: sum = {s:>9.3f}  (sum / H = {s / H:.4f})")
print(f"  k = 3, H =   40: sum = {gallagher_sum(3, 40):>9.3f}  (grows like H^2/2)")
