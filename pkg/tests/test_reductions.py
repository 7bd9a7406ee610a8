from itertools import combinations, product
from math import comb

import networkx as nx
import pytest

from pcrp import (
    Disconnected,
    DisconnectedOutput,
    ImproperColoring,
    InvalidCover,
    NotAClique,
    NotEnoughPairs,
    SizeLimitExceeded,
    brute_3coloring,
    brute_max_clique,
    clique_to_path,
    coloring_to_paths,
    exact_minpcrp,
    gen_3pcrp,
    gen_krpsp,
    is_st_path,
    max_rpsp_dp,
    pairs_covered,
    path_to_clique,
    paths_to_coloring,
    verify_solution,
)
from pcrp.reductions import layer_vertex


def proper(g, coloring) -> bool:
    return len(set(coloring.values())) <= 3 and all(coloring[u] != coloring[v] for u, v in g.edges)


def test_gen_3pcrp_sizes():
    inst, layout = gen_3pcrp(nx.complete_graph(3))
    assert inst.n == 17 and len(layout.gadgets) == 3
    assert all(gd.edge for gd in layout.gadgets.values())
    inst, layout = gen_3pcrp(nx.path_graph(2))
    assert inst.n == 7 and len(layout.gadgets) == 1


def test_missing_edge_gives_second_configuration():
    g = nx.complete_graph(3)
    g.remove_edge(0, 2)
    _, layout = gen_3pcrp(g)
    assert not layout.gadgets[(0, 2)].edge
    assert layout.gadgets[(0, 1)].edge and layout.gadgets[(1, 2)].edge


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_vertex_and_pair_counts(n):
    g = nx.cycle_graph(n) if n > 2 else nx.path_graph(2)
    inst, _ = gen_3pcrp(g)
    assert inst.n == 5 * comb(n, 2) + 2
    assert len(inst.pairs) == g.number_of_edges() + n * comb(n - 1, 2)


def test_disconnected_graph_rejected():
    with pytest.raises(Disconnected):
        gen_3pcrp(nx.empty_graph(3))
    with pytest.raises(Disconnected):
        gen_3pcrp(nx.empty_graph(0))


def test_single_vertex_graph():
    g = nx.empty_graph(1)
    inst, layout = gen_3pcrp(g)
    assert inst.n == 2 and not layout.gadgets
    paths = coloring_to_paths(g, {0: "red"}, layout)
    assert paths_to_coloring(inst, layout, paths) == {0: 0}


def test_coloring_to_paths_examples():
    g = nx.complete_graph(3)
    inst, layout = gen_3pcrp(g)
    paths = coloring_to_paths(g, {0: 1, 1: 2, 2: 3}, layout)
    assert verify_solution(inst, paths).valid
    back = paths_to_coloring(inst, layout, paths)
    assert proper(g, back)
    p3 = nx.path_graph(3)
    inst, layout = gen_3pcrp(p3)
    assert verify_solution(inst, coloring_to_paths(p3, {0: 1, 1: 2, 2: 1}, layout)).valid
    with pytest.raises(ImproperColoring):
        coloring_to_paths(g, {0: 1, 1: 1, 2: 2}, gen_3pcrp(g)[1])


def test_invalid_cover_rejected():
    g = nx.complete_graph(3)
    inst, layout = gen_3pcrp(g)
    paths = coloring_to_paths(g, {0: 0, 1: 1, 2: 2}, layout)
    with pytest.raises(InvalidCover):
        paths_to_coloring(inst, layout, paths[:2])


def test_star_cover_maps_to_coloring():
    star = nx.star_graph(3)
    inst, layout = gen_3pcrp(star)
    paths = exact_minpcrp(inst, k_max=3, method="chains")
    assert paths is not None
    assert proper(star, paths_to_coloring(inst, layout, paths))


def test_k4_has_no_three_path_cover():
    inst, _ = gen_3pcrp(nx.complete_graph(4))
    assert exact_minpcrp(inst, k_max=3, method="chains") is None


def test_gen_krpsp_shape():
    inst = gen_krpsp(nx.complete_graph(3), 3)
    assert inst.n == 11
    with pytest.raises(DisconnectedOutput):
        gen_krpsp(nx.empty_graph(3), 2)
    with pytest.raises(DisconnectedOutput):
        gen_krpsp(nx.empty_graph(0), 2)


def test_gen_krpsp_arcs_follow_edges():
    g = nx.path_graph(3)
    inst = gen_krpsp(g, 2)
    inner = {(u, v) for u, v in inst.dag.arcs if u != inst.source and v != inst.sink}
    expected = set()
    for i, j in g.edges:
        expected |= {(layer_vertex(3, i, 0), layer_vertex(3, j, 1)), (layer_vertex(3, j, 0), layer_vertex(3, i, 1))}
    assert inner == expected


def test_clique_path_examples():
    k3 = nx.complete_graph(3)
    inst = gen_krpsp(k3, 3)
    path = clique_to_path(k3, 3, [0, 1, 2], inst)
    assert is_st_path(inst.dag, path) and len(pairs_covered(inst, path)) == 3
    assert path_to_clique(k3, 3, inst, path) == {0, 1, 2}
    k4 = nx.complete_graph(4)
    inst = gen_krpsp(k4, 3)
    for tri in combinations(range(4), 3):
        assert len(pairs_covered(inst, clique_to_path(k4, 3, tri, inst))) == 3
    with pytest.raises(NotAClique):
        clique_to_path(nx.path_graph(3), 3, [0, 1, 2], gen_krpsp(nx.path_graph(3), 3))


def test_short_path_rejected():
    p3 = nx.path_graph(3)
    inst = gen_krpsp(p3, 3)
    # 0 - 1 - 0 uses only edge {0, 1}: two pairs, not three
    path = (inst.source, layer_vertex(3, 0, 0), layer_vertex(3, 1, 1), layer_vertex(3, 0, 2), inst.sink)
    assert len(pairs_covered(inst, path)) == 2
    with pytest.raises(NotEnoughPairs):
        path_to_clique(p3, 3, inst, path)


def test_dp_finds_cliques():
    g = nx.complete_graph(4)
    g.remove_edge(0, 1)
    for h, want in ((2, 1), (3, 3), (4, None)):
        result = max_rpsp_dp(gen_krpsp(g, h))
        assert result.count <= comb(h, 2)
        if want is None:
            assert result.count < comb(h, 2)
        else:
            assert result.count == want
            assert len(path_to_clique(g, h, gen_krpsp(g, h), result.path)) == h


def test_brute_solvers_examples():
    assert brute_3coloring(nx.complete_graph(3)) is not None
    assert len(brute_max_clique(nx.complete_graph(3))) == 3
    assert brute_3coloring(nx.complete_graph(4)) is None
    assert len(brute_max_clique(nx.complete_graph(4))) == 4
    petersen = nx.petersen_graph()
    coloring = brute_3coloring(petersen)
    assert coloring is not None and proper(petersen, coloring)
    assert len(brute_max_clique(petersen)) == 2
    with pytest.raises(SizeLimitExceeded):
        brute_3coloring(nx.path_graph(17))
    with pytest.raises(SizeLimitExceeded):
        brute_max_clique(nx.path_graph(25))


@pytest.mark.parametrize("seed", range(25))
def test_brute_clique_matches_networkx(seed):
    g = nx.gnp_random_graph(12, 0.5, seed=seed)
    ours = brute_max_clique(g)
    assert all(g.has_edge(u, v) for u, v in combinations(ours, 2))
    assert len(ours) == max(len(c) for c in nx.find_cliques(g))


@pytest.mark.parametrize("seed", range(25))
def test_brute_coloring_matches_exhaustive(seed):
    g = nx.gnp_random_graph(7, 0.55, seed=seed)
    exists = any(
        all(c[u] != c[v] for u, v in g.edges) for c in product(range(3), repeat=7)
    )
    found = brute_3coloring(g)
    assert (found is not None) == exists
    if found is not None:
        assert proper(g, found)
