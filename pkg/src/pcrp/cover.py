"""Path-cover solvers: classic minimum path cover, 1- and 2-path exact
deciders, an exhaustive MinPCRP oracle and the greedy heuristic."""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import Infeasible
from .graph import (
    Dag,
    ReachabilityIndex,
    StPath,
    bits,
    enumerate_st_paths,
    is_chain,
    stitch_chain,
    to_mask,
)
from .instance import (
    PcrpInstance,
    RequiredPair,
    augment_trivial_pairs,
    pairs_covered,
)
from .maxrpsp import max_rpsp_dp


def min_chain_cover(vertices: Iterable[int], reach: ReachabilityIndex) -> list[tuple[int, ...]]:
    """Minimum partition of ``vertices`` into reachability chains.

    Each chain is ordered along reachability.  The size is ``len(vertices)``
    minus a maximum matching of the bipartite graph ``u -> v`` (``u``
    reaching ``v``), which by Dilworth's theorem equals the largest antichain.
    """
    members = sorted(set(vertices))
    if not members:
        return []
    index = {v: k for k, v in enumerate(members)}
    rows, cols = [], []
    for u in members:
        for v in bits(reach.desc[u] & to_mask(members)):
            if v != u:
                rows.append(index[u])
                cols.append(index[v])
    size = len(members)
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size))
    match = maximum_bipartite_matching(graph, perm_type="column")
    successor = {k: int(c) for k, c in enumerate(match) if c >= 0}
    has_pred = set(successor.values())
    chains = []
    for start in range(size):
        if start in has_pred:
            continue
        chain = [start]
        while chain[-1] in successor:
            chain.append(successor[chain[-1]])
        chains.append(tuple(members[k] for k in chain))
    return chains


def min_path_cover(dag: Dag) -> list[StPath]:
    """Fewest st-paths that together visit every vertex."""
    return [stitch_chain(dag, chain) for chain in min_chain_cover(range(dag.n), dag.reach)]


def solve_1pcrp(inst: PcrpInstance) -> StPath | None:
    """The single covering path, if reachability totally orders the vertices."""
    if inst.uncoverable:
        return None
    order = is_chain(range(inst.n), inst.reach)
    if order is None:
        return None
    return stitch_chain(inst.dag, order)


@dataclass(frozen=True)
class PairCompatGraph:
    """Undirected graph over pairs; an edge means one path can cover both."""

    pairs: tuple[RequiredPair, ...]
    adjacency: tuple[int, ...]

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i] >> j & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.adjacency) for j in bits(row) if i < j]

    def is_clique(self, members: Iterable[int]) -> bool:
        members = list(members)
        return all(self.has_edge(i, j) for i in members for j in members if i < j)


def pair_compat_graph(inst: PcrpInstance) -> PairCompatGraph:
    if inst.uncoverable:
        raise Infeasible(f"uncoverable pair ({inst.uncoverable[0].a},{inst.uncoverable[0].b})")
    comparable = inst.reach.comparable
    vertex_masks = [1 << a | 1 << b for a, b in inst.pairs]
    fits = [comparable[a] & comparable[b] for a, b in inst.pairs]
    adjacency = []
    for i in range(len(inst.pairs)):
        row = 0
        for j, vm in enumerate(vertex_masks):
            if j != i and not vm & ~fits[i]:
                row |= 1 << j
        adjacency.append(row)
    return PairCompatGraph(inst.pairs, tuple(adjacency))


def _two_color_complement(graph: PairCompatGraph) -> list[int] | None:
    """BFS 2-coloring of the complement, walking non-edges straight off the bitsets."""
    size = len(graph.adjacency)
    everyone = (1 << size) - 1
    color = [-1] * size
    for root in range(size):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in bits(everyone & ~graph.adjacency[u] & ~(1 << u)):
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    return color


def _clique_path(inst: PcrpInstance, pairs: Iterable[RequiredPair]) -> StPath:
    order = is_chain((v for p in pairs for v in p), inst.reach)
    assert order is not None, "compatible pairs must span a chain"
    return stitch_chain(inst.dag, order)


def solve_2pcrp(inst: PcrpInstance) -> tuple[StPath, StPath] | None:
    """Two st-paths covering every vertex and pair, or ``None`` if none exist.

    When one path already suffices it is returned twice.
    """
    if inst.uncoverable:
        raise Infeasible(f"uncoverable pair ({inst.uncoverable[0].a},{inst.uncoverable[0].b})")
    single = solve_1pcrp(inst)
    if single is not None:
        return single, single
    full = augment_trivial_pairs(inst)
    graph = pair_compat_graph(full)
    color = _two_color_complement(graph)
    if color is None:
        return None
    first = _clique_path(full, (p for p, c in zip(full.pairs, color) if c == 0))
    second = _clique_path(full, (p for p, c in zip(full.pairs, color) if c == 1))
    return first, second


# ----------------------------------------------------------------- exact oracle


def _cover_elements(inst: PcrpInstance) -> list[int]:
    """Vertex masks that must each sit on one path: every pair, plus lone vertices."""
    used = {v for p in inst.pairs for v in p}
    elements = [1 << a | 1 << b for a, b in inst.pairs]
    elements += [1 << v for v in range(inst.n) if v not in used]
    return elements


def _search_paths(inst: PcrpInstance, k_max: int, budget: int, lower: int) -> list[StPath] | None:
    paths = list(enumerate_st_paths(inst.dag, budget))
    n = inst.n
    pair_bit = {p: n + k for k, p in enumerate(inst.pairs)}
    full = (1 << (n + len(inst.pairs))) - 1
    masks: dict[int, int] = {}
    for idx, path in enumerate(paths):
        mask = to_mask(path)
        for p in pairs_covered(inst, path):
            mask |= 1 << pair_bit[p]
        masks.setdefault(mask, idx)
    uniq = sorted(masks.items(), key=lambda kv: kv[1])
    covering: list[list[int]] = [[] for _ in range(n + len(inst.pairs))]
    for mask, _ in uniq:
        for e in bits(mask):
            covering[e].append(mask)
    failed: set[tuple[int, int]] = set()

    def search(uncovered: int, slots: int, chosen: list[int]) -> bool:
        if not uncovered:
            return True
        if slots == 0 or (uncovered, slots) in failed:
            return False
        pivot = min(bits(uncovered), key=lambda e: len(covering[e]))
        for mask in covering[pivot]:
            if slots == 1 and uncovered & ~mask:
                continue
            chosen.append(mask)
            if search(uncovered & ~mask, slots - 1, chosen):
                return True
            chosen.pop()
        failed.add((uncovered, slots))
        return False

    for k in range(max(1, lower), k_max + 1):
        chosen: list[int] = []
        if search(full, k, chosen):
            return [paths[masks[m]] for m in chosen]
    return None


def _search_chains(inst: PcrpInstance, k_max: int, lower: int) -> list[StPath] | None:
    """Place every pair (and lone vertex) on one of ``k`` reachability chains."""
    comparable = inst.reach.comparable
    elements = _cover_elements(inst)
    fits = []
    for e in elements:
        f = -1
        for v in bits(e):
            f &= comparable[v]
        fits.append(f)

    def search(chains: list[int], remaining: list[int], k: int) -> list[int] | None:
        best_e, best_opts = -1, None
        for e in remaining:
            if any(not elements[e] & ~c for c in chains):
                continue  # already lies on a chain
            opts = [c for c, chain in enumerate(chains) if not chain & ~fits[e]]
            if len(chains) < k:
                opts.append(len(chains))
            if best_opts is None or len(opts) < len(best_opts):
                best_e, best_opts = e, opts
                if not opts:
                    return None
        if best_opts is None:
            return chains
        rest = [e for e in remaining if e != best_e]
        for c in best_opts:
            trial = chains[:c] + [(chains[c] if c < len(chains) else 0) | elements[best_e]] + chains[c + 1 :]
            found = search(trial, rest, k)
            if found is not None:
                return found
        return None

    for k in range(max(1, lower), k_max + 1):
        found = search([], list(range(len(elements))), k)
        if found is not None:
            return [stitch_chain(inst.dag, is_chain(bits(c), inst.reach) or ()) for c in found]
    return None


def exact_minpcrp(
    inst: PcrpInstance,
    k_max: int = 6,
    budget: int = 10**6,
    method: str = "paths",
) -> list[StPath] | None:
    """Smallest set of at most ``k_max`` st-paths covering all vertices and pairs.

    ``method="paths"`` enumerates st-paths (at most ``budget`` of them) and
    searches for a covering k-subset; ``method="chains"`` instead places each
    pair on one of k reachability chains, which scales to instances whose
    st-paths are too many to list.  Returns ``None`` if no cover of size
    ``<= k_max`` exists or a pair is uncoverable.
    """
    if inst.uncoverable:
        return None
    lower = len(min_chain_cover(range(inst.n), inst.reach))
    if lower > k_max:
        return None
    if method == "paths":
        return _search_paths(inst, k_max, budget, lower)
    if method == "chains":
        return _search_chains(inst, k_max, lower)
    raise ValueError(f"unknown method {method!r}")


def greedy_minpcrp(inst: PcrpInstance) -> list[StPath]:
    """Add max-coverage paths until every pair is covered, then mop up vertices."""
    if inst.uncoverable:
        raise Infeasible(f"uncoverable pair ({inst.uncoverable[0].a},{inst.uncoverable[0].b})")
    paths: list[StPath] = []
    residual = list(inst.pairs)
    while residual:
        best = max_rpsp_dp(inst.with_pairs(residual))
        assert best.count > 0, "a coverable pair always admits a path"
        paths.append(best.path)
        on = set(best.path)
        residual = [p for p in residual if not (p.a in on and p.b in on)]
    seen = {v for path in paths for v in path}
    leftover = [v for v in range(inst.n) if v not in seen]
    paths += [stitch_chain(inst.dag, chain) for chain in min_chain_cover(leftover, inst.reach)]
    return paths
