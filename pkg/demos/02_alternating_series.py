#!/usr/bin/env python3
"""The alternating series sum (-1)^n n / p_n and its parity-series twin.

Raw partial sums oscillate with amplitude ~ 1/(2 log n); averaging
consecutive partial sums removes the oscillation and the value settles
near -0.052161. The same machinery runs with any unit phase z.
"""

import time

from erdoslab import average_consecutive, build_table, erdos_partial, parity_partial

N = 10**6  # push to 10**7 (table limit 181_000_000) for the full picture
LIMIT = 16_000_000

print(f"sieving to {LIMIT:,} ...")
table = build_table(LIMIT)

t0 = time.perf_counter()
trace = erdos_partial(table, N + 1, -1.0, dense_windows=((N - 1, N + 1),))
print(f"summed {N:,} terms in {time.perf_counter() - t0:.2f}s")

print()
print("raw partial sums oscillate:")
for n in (N - 1, N, N + 1):
    print(f"  S_{n} = {trace.value_at(n).real:+.6f}")

averaged = average_consecutive(trace)
print()
print(f"averaged consecutive sums at n = {N:,}: {averaged.value_at(N).real:+.6f}")
print("reference value from much longer runs:  -0.052161")

print()
print("checkpointed decay of the averaged trace toward the limit:")
for n in (10**3, 10**4, 10**5, 10**6):
    tr = erdos_partial(table, n + 1, -1.0, dense_windows=((n, n + 1),))
    av = average_consecutive(tr).value_at(n).real
    print(f"  n = 10^{len(str(n)) - 1}: averaged = {av:+.6f}  (offset {av + 0.052161:+.1e})")

print()
print("the parity-series form sum (-1)^pi(m) / (m log m):")
tr = parity_partial(table, 10**6, -1.0)
print(f"  partial sum to 10^6 = {tr.final_value.real:+.6f}")

print()
print("a complex unit phase works the same way (z = i):")
tr = erdos_partial(table, 10**5, 1j)
print(f"  sum z^n n/p_n to 10^5 = {tr.final_value:.6f}")
