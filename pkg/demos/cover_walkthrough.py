"""
Covering a small DAG with st-paths
==================================

A two-branch DAG where each branch carries a required pair.  Without pairs
two paths suffice; once a pair straddles both branches the answer changes.
"""

from pcrp import Dag, PcrpInstance, exact_minpcrp, greedy_minpcrp, min_path_cover, solve_2pcrp, verify_solution

# source 0, sink 7; vertices 1-3 form one branch and 4-6 the other,
# with a shortcut 2 -> 5 between them
dag = Dag(8, ((0, 1), (1, 2), (2, 3), (3, 7), (0, 4), (4, 5), (5, 6), (6, 7), (2, 5)), 0, 7)

# %%
# Vertices only: Dilworth's theorem gives the minimum number of paths.
print("vertex cover:", min_path_cover(dag))

# %%
# A pair on each branch still fits in two paths.
easy = PcrpInstance(dag, ((1, 3), (4, 6)))
print("two paths:", solve_2pcrp(easy))

# %%
# Requiring (1, 5) forces a path through the shortcut, which skips 3 and 4,
# so a third path is needed.  The greedy cover is checked against the
# exhaustive search.
hard = PcrpInstance(dag, ((1, 3), (4, 6), (1, 5)))
print("two paths possible:", solve_2pcrp(hard) is not None)
exact = exact_minpcrp(hard, k_max=4)
greedy = greedy_minpcrp(hard)
print("exact:", exact)
print("greedy uses", len(greedy), "paths; valid:", verify_solution(hard, greedy).valid)
