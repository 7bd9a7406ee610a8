"""
Hard instances from graph problems
==================================

Two instance builders turn graph questions into path questions.  A graph is
3-colorable exactly when its gadget DAG has a 3-path cover, and it has an
h-clique exactly when its layered DAG has a path covering C(h, 2) pairs.
"""

from math import comb

import networkx as nx

from pcrp import (
    brute_3coloring,
    brute_max_clique,
    clique_to_path,
    coloring_to_paths,
    exact_minpcrp,
    gen_3pcrp,
    gen_krpsp,
    max_rpsp_dp,
    path_to_clique,
    paths_to_coloring,
)

# %%
# The 5-cycle needs three colors; K4 needs four.
for name, g in [("C5", nx.cycle_graph(5)), ("K4", nx.complete_graph(4))]:
    inst, layout = gen_3pcrp(g)
    coloring = brute_3coloring(g)
    cover = exact_minpcrp(inst, k_max=3, method="chains")
    print(f"{name}: {inst.n} vertices, {len(inst.pairs)} pairs, 3-colorable {coloring is not None}")
    if coloring is not None:
        paths = coloring_to_paths(g, coloring, layout)
        print("  coloring -> paths -> coloring:", paths_to_coloring(inst, layout, paths))
    print("  3-path cover found:", cover is not None)

# %%
# The Petersen graph has no triangles, so its largest clique is an edge.
g = nx.petersen_graph()
print("Petersen clique number:", len(brute_max_clique(g)))
for h in (2, 3):
    inst = gen_krpsp(g, h)
    best = max_rpsp_dp(inst)
    print(f"h={h}: best path covers {best.count} pair(s), need {comb(h, 2)}")
    if best.count >= comb(h, 2):
        print("  clique read back:", sorted(path_to_clique(g, h, inst, best.path)))

# %%
# Going forward from a known clique gives a witness path directly.
wheel = nx.wheel_graph(6)
clique = brute_max_clique(wheel)
inst = gen_krpsp(wheel, len(clique))
print("wheel clique", sorted(clique), "-> path", clique_to_path(wheel, len(clique), clique, inst))
