#!/usr/bin/env python3
"""The two series differ by a constant: watching the difference stabilize.

At matched scales (x terms of the index-weighted series against
m <= x log x terms of the parity series scaled by z/(z-1)) the difference
LHS - RHS settles toward a constant; its consecutive jumps shrink as x
grows.
"""

from erdoslab import build_table, verify_equivalence

XS = [10**4, 3 * 10**4, 10**5, 3 * 10**5, 10**6]
LIMIT = 16_000_000  # covers p_(1e6) and every m <= 1e6 * log(1e6)

print(f"sieving to {LIMIT:,} ...")
table = build_table(LIMIT)

rep = verify_equivalence(table, XS, -1.0)
print()
print(f"{'x':>9}  {'LHS':>10}  {'RHS':>10}  {'difference':>11}")
for x, l, r, d in zip(rep.x_values, rep.lhs, rep.rhs, rep.differences):
    print(f"{x:>9,}  {l.real:>+10.6f}  {r.real:>+10.6f}  {d.real:>+11.6f}")

print()
print("consecutive difference jumps (should shrink):", [f"{v:.5f}" for v in rep.consecutive_spreads()])
print(f"max pairwise spread over the top half of x: {rep.max_pairwise_spread():.5f}")

print()
print("same comparison at phase z = i (factor z/(z-1) applied to the parity side):")
rep_i = verify_equivalence(table, [10**4, 10**5, 10**6], 1j)
for x, d in zip(rep_i.x_values, rep_i.differences):
    print(f"  x = {x:>9,}: difference = {d:.6f}")
