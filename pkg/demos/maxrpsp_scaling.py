"""
One path, many pairs
====================

The dynamic program for the single path covering the most pairs works over
subsets of a small window of overlapping pairs.  On instances made of
independent blocks the window size stays fixed while the number of pairs
grows, so the number of table entries grows linearly.
"""

import time

import numpy as np

from pcrp import max_rpsp_bruteforce, max_rpsp_dp, serial_blocks, serial_blocks_n

# %%
# A tiny instance first, where enumerating every st-path is still cheap.
small = serial_blocks(2, 2)
dp, brute = max_rpsp_dp(small), max_rpsp_bruteforce(small)
print(f"{len(small.pairs)} pairs: dp {dp.count}, enumeration {brute.count}, witness {dp.path}")

# %%
# Growing n with the overlap degree held at 4.
sizes = np.array([100, 200, 400, 800])
states, pairs, seconds = [], [], []
for n in sizes:
    inst = serial_blocks_n(int(n), 4)
    start = time.perf_counter()
    result = max_rpsp_dp(inst)
    seconds.append(time.perf_counter() - start)
    states.append(result.state_count)
    pairs.append(len(inst.pairs))
per_pair = np.array(states) / np.array(pairs)
for n, s, r, t, q in zip(sizes, states, pairs, seconds, per_pair):
    print(f"n={n:4d} |R|={r:4d} states={s:6d} states/pair={q:6.1f} {t:.2f}s")

# %%
# Raising the overlap degree instead: the per-pair table size grows with it.
for p in range(1, 7):
    result = max_rpsp_dp(serial_blocks_n(400, p))
    print(f"p={p} states={result.state_count} covered={result.count}")
