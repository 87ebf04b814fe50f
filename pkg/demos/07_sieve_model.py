#!/usr/bin/env python3
"""The random sifted-set model: one uniform residue deleted per prime.

Shows the Mertens cutoff, reproducible samples, mean/variance against
their predictions, the parity bias and its decay in lambda, the exact
Bonferroni sandwich, and full enumeration at toy scale.
"""

import math

from erdoslab import (
    ModelConfig,
    binomial_moment_sum,
    bonferroni_bound,
    build_table,
    draw_sample,
    exact_parity_bias,
    mertens_product,
    moments,
    parity_bias,
    parity_bias_stderr,
    sieve_cutoff,
)

table = build_table(10_000)
X = 1e6

z = sieve_cutoff(X, table)
print(f"x = {X:g}: cutoff z = {z} (Mertens product {mertens_product(z, table):.6f} "
      f"vs 1/log x = {1 / math.log(X):.6f})")

cfg = ModelConfig.from_scale(X, 1.0, table, seed=42)
print(f"window (0, {cfg.window_len}], residues drawn per prime <= {cfg.cutoff_z}")

s = draw_sample(cfg, table=table)
print(f"sample 0 survivors: {s.survivors.tolist()}")
print(f"replayed identically: {draw_sample(cfg, table=table).survivors.tolist()}")

print()
print("moments of the survivor count at the cutoff (10^4 samples):")
for lam in (1.0, 2.0, 4.0):
    c = ModelConfig.from_scale(X, lam, table, seed=42)
    rep = moments(c, c.cutoff_z, 10_000, table)
    print(f"  lambda = {lam:g}: mean {rep.mean:.3f} (predicted {rep.predicted_mean:.3f}), "
          f"variance {rep.variance:.3f} <= bound {rep.predicted_variance_bound:.3f}")

print()
print("parity bias E(-1)^size decays in lambda (10^5 samples):")
for lam in (0.5, 1.0, 2.0, 4.0):
    c = ModelConfig.from_scale(X, lam, table, seed=42)
    b = parity_bias(c, 100_000, table)
    se = parity_bias_stderr(b, 100_000)
    print(f"  lambda = {lam:g}: {b:+.5f} +/- {se:.5f}   (e^-2lambda = {math.exp(-2 * lam):.5f})")
print("  (the asymptotic heuristic overshoots at this scale: every sifting")
print("   step between lambda log x and z keeps damping the bias)")

print()
print("Bonferroni sandwich: truncated expansions bound (-1)^N exactly")
N = 5
for r in (0, 1, 2, 3, 4, 5, 6):
    bb = bonferroni_bound(N, r)
    print(f"  r = {r}: sum = {bb.value:>5}  ({bb.side} bound on (-1)^{N} = {(-1) ** N}"
          + (", exact)" if bb.exact else ")"))

print()
c1 = ModelConfig.from_scale(X, 1.0, table, seed=42)
pb = parity_bias(c1, 10_000, table)
print("truncated binomial moment sums sandwich the parity bias (same seed):")
for r in (3, 4, 5, 60):
    v = binomial_moment_sum(c1, r, 10_000, table)
    print(f"  r = {r:>2}: {v:+.6f}" + ("  == parity bias (binomial theorem)" if v == pb else ""))

print()
small = ModelConfig.from_scale(60, 1.0, table, seed=7)
print(f"toy model (window {small.window_len}, cutoff {small.cutoff_z}): "
      f"exact enumeration over all {2 * 3 * 5 * 7} residue tuples")
print(f"  exact E(-1)^size = {exact_parity_bias(small, table):+.6f}")
print(f"  Monte Carlo      = {parity_bias(small, 100_000, table):+.6f}")
