#!/usr/bin/env python3
"""Pair-correlation sums against the refined asymptotic.

2 sum_{h1<h2<=H} of the pair singular values tracks
H^2 - H log H + (1 - gamma - log 2 pi) H remarkably closely, and stays
below H^2 throughout.
"""

import numpy as np

from erdoslab import pair_correlation_asymptotic, pair_correlation_curve

HS = [50, 100, 200, 500, 1000, 2000, 5000]

curve = pair_correlation_curve(np.array(HS))
print(f"{'H':>6}  {'pair sum':>14}  {'asymptotic':>14}  {'rel err':>9}  {'vs H^2':>8}")
for H, s in zip(HS, curve):
    a = pair_correlation_asymptotic(H)
    print(f"{H:>6}  {s:>14.2f}  {a:>14.2f}  {abs(s - a) / a:>9.2e}  {s / H**2:>8.5f}")

print()
hs = np.arange(2, 5001)
full = pair_correlation_curve(hs)
viol = hs[full > hs.astype(float) ** 2]
if viol.size:
    print(f"square bound first holds for every H >= {int(viol[-1]) + 1}")
else:
    print("the square bound 2*sum <= H^2 holds at every H >= 2 we measured")
print("(the deficit H log H + ... below H^2 is the same second-order term the")
print(" asymptotic captures; the curve hugging it is what makes the variance")
print(" of the sifted-set sizes sub-quadratic)")
