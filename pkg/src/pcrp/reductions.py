"""Instance generators from 3-Coloring and h-Clique, with the maps that carry
solutions back and forth, plus small exact solvers for the source problems.

Undirected graphs are :class:`networkx.Graph` objects; their nodes are
taken in sorted order, so node ``k`` in that order plays the role of the
k-th vertex of the construction.
"""

from __future__ import annotations

import logging
from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import networkx as nx

from .errors import (
    Disconnected,
    DisconnectedOutput,
    ImproperColoring,
    InvalidCover,
    NotAClique,
    NotEnoughPairs,
    PcrpError,
    SizeLimitExceeded,
    ValidationError,
)
from .graph import Dag, StPath, is_st_path
from .instance import PcrpInstance, RequiredPair, pairs_covered, verify_solution

log = logging.getLogger(__name__)

COLORING_LIMIT = 16
CLIQUE_LIMIT = 24


def _nodes(g: nx.Graph) -> list[Hashable]:
    return sorted(g.nodes)


# -------------------------------------------------------------- 3-Coloring


@dataclass(frozen=True)
class Gadget:
    entry: int
    first: int  # copy of the smaller-indexed graph vertex
    second: int
    spare: int  # the f vertex
    exit: int
    edge: bool  # configuration (1) iff the two graph vertices are adjacent


@dataclass(frozen=True)
class GadgetLayout:
    nodes: tuple[Hashable, ...]
    gadgets: dict[tuple[int, int], Gadget] = field(hash=False)
    source: int
    sink: int

    def copy_of(self, i: int, j: int) -> int:
        """Vertex standing for graph vertex ``i`` inside the gadget of ``{i, j}``."""
        g = self.gadgets[(min(i, j), max(i, j))]
        return g.first if i < j else g.second

    def to_json(self) -> dict:
        return {
            "kind": "3col",
            "nodes": [repr(v) for v in self.nodes],
            "source": self.source,
            "sink": self.sink,
            "gadgets": [
                {
                    "pair": [i, j],
                    "config": 1 if g.edge else 2,
                    "s": g.entry,
                    "n_i": g.first,
                    "n_j": g.second,
                    "f": g.spare,
                    "t": g.exit,
                }
                for (i, j), g in sorted(self.gadgets.items())
            ],
        }


def gen_3pcrp(g: nx.Graph) -> tuple[PcrpInstance, GadgetLayout]:
    """Build the 3-PCRP instance whose 3-path covers mirror 3-colorings of ``g``."""
    nodes = _nodes(g)
    n = len(nodes)
    if n == 0 or not nx.is_connected(g):
        raise Disconnected("3-coloring reduction needs a non-empty connected graph")
    index = {v: k for k, v in enumerate(nodes)}
    adjacent = {frozenset((index[u], index[v])) for u, v in g.edges if u != v}
    arcs: list[tuple[int, int]] = []
    gadgets: dict[tuple[int, int], Gadget] = {}
    source = 0
    previous = source
    nxt = 1
    for i, j in combinations(range(n), 2):
        entry, first, second, spare, exit_ = range(nxt, nxt + 5)
        nxt += 5
        edge = frozenset((i, j)) in adjacent
        arcs.append((previous, entry))
        if edge:
            arcs += [
                (entry, first), (entry, second), (entry, spare),
                (first, exit_), (second, exit_), (spare, exit_),
            ]
        else:
            arcs += [
                (entry, first), (entry, spare), (first, second),
                (second, exit_), (spare, exit_),
            ]
        gadgets[(i, j)] = Gadget(entry, first, second, spare, exit_, edge)
        previous = exit_
    sink = nxt
    arcs.append((previous, sink))
    layout = GadgetLayout(tuple(nodes), gadgets, source, sink)
    pairs = [RequiredPair(source, gd.spare) for gd in gadgets.values() if gd.edge]
    for i in range(n):
        copies = [layout.copy_of(i, j) for j in range(n) if j != i]
        pairs += [RequiredPair(a, b) for a, b in combinations(copies, 2)]
    inst = PcrpInstance(Dag(sink + 1, tuple(arcs), source, sink), tuple(pairs))
    return inst, layout


def _color_classes(g: nx.Graph, coloring: Mapping[Hashable, Hashable]) -> dict[int, int]:
    nodes = _nodes(g)
    labels = sorted({coloring[v] for v in nodes}, key=repr)
    if len(labels) > 3:
        raise ImproperColoring(f"{len(labels)} colors used")
    slot = {c: k for k, c in enumerate(labels)}
    classes = {k: slot[coloring[v]] for k, v in enumerate(nodes)}
    for u, v in g.edges:
        if u != v and coloring[u] == coloring[v]:
            raise ImproperColoring(f"edge {{{u!r}, {v!r}}} is monochromatic")
    return classes


def coloring_to_paths(
    g: nx.Graph, coloring: Mapping[Hashable, Hashable], layout: GadgetLayout
) -> list[StPath]:
    """Three st-paths, one per color class, covering the generated instance."""
    classes = _color_classes(g, coloring)
    paths = []
    for color in range(3):
        path = [layout.source]
        for (i, j), gd in sorted(layout.gadgets.items()):
            path.append(gd.entry)
            if not gd.edge and color in (classes[i], classes[j]):
                # n_i only exits through n_j here, so either color takes both
                path += [gd.first, gd.second]
            elif classes[i] == color:
                path.append(gd.first)
            elif classes[j] == color:
                path.append(gd.second)
            else:
                path.append(gd.spare)
            path.append(gd.exit)
        path.append(layout.sink)
        paths.append(tuple(path))
    return paths


def paths_to_coloring(
    inst: PcrpInstance, layout: GadgetLayout, paths: Sequence[Sequence[int]]
) -> dict[Hashable, int]:
    """Read a proper 3-coloring off a valid 3-path cover.

    A graph vertex takes the index of the path through its copy in the gadget
    shared with its first neighbour; every copy lies on that same path.
    """
    if len(paths) > 3:
        raise InvalidCover(f"expected at most 3 paths, got {len(paths)}")
    try:
        report = verify_solution(inst, paths, "cover-all")
    except PcrpError as exc:
        raise InvalidCover(str(exc)) from exc
    if not report.valid:
        raise InvalidCover(
            f"uncovered vertices {list(report.uncovered_vertices)}, "
            f"uncovered pairs {[tuple(p) for p in report.uncovered_pairs]}"
        )
    n = len(layout.nodes)
    on_path = [set(p) for p in paths]
    coloring: dict[Hashable, int] = {}
    for i in range(n):
        neighbour = next(
            (j for j in range(n) if j != i and layout.gadgets[(min(i, j), max(i, j))].edge),
            None,
        )
        if neighbour is None:  # a lone vertex has no gadget to read
            coloring[layout.nodes[i]] = 0
            continue
        copy = layout.copy_of(i, neighbour)
        coloring[layout.nodes[i]] = next(x for x, on in enumerate(on_path) if copy in on)
    for (i, j), gd in layout.gadgets.items():
        if gd.edge and coloring[layout.nodes[i]] == coloring[layout.nodes[j]]:
            raise ImproperColoring(f"derived coloring clashes on gadget {(i, j)}")
    return coloring


def brute_3coloring(g: nx.Graph, limit: int = COLORING_LIMIT) -> dict[Hashable, int] | None:
    """Exhaustive backtracking; colors are 0, 1, 2 and first use is in order."""
    nodes = _nodes(g)
    if len(nodes) > limit:
        raise SizeLimitExceeded(f"{len(nodes)} vertices exceed the limit of {limit}")
    index = {v: k for k, v in enumerate(nodes)}
    earlier = [[index[u] for u in g.adj[v] if index[u] < k] for k, v in enumerate(nodes)]
    color = [-1] * len(nodes)

    def place(k: int, used: int) -> bool:
        if k == len(nodes):
            return True
        for c in range(min(3, used + 1)):
            if all(color[u] != c for u in earlier[k]):
                color[k] = c
                if place(k + 1, max(used, c + 1)):
                    return True
        color[k] = -1
        return False

    if not place(0, 0):
        return None
    return {v: color[k] for k, v in enumerate(nodes)}


# ----------------------------------------------------------------- h-Clique


def layer_vertex(n: int, i: int, z: int) -> int:
    """Id of the copy of graph vertex ``i`` in layer ``z`` (both 0-based)."""
    return 1 + z * n + i


def gen_krpsp(g: nx.Graph, h: int) -> PcrpInstance:
    """Layered DAG with ``h`` copies of every vertex; paths covering
    ``C(h, 2)`` pairs correspond to h-cliques of ``g``."""
    if h < 2:
        raise ValueError("h must be at least 2")
    nodes = _nodes(g)
    n = len(nodes)
    index = {v: k for k, v in enumerate(nodes)}
    edges = sorted({(min(index[u], index[v]), max(index[u], index[v])) for u, v in g.edges if u != v})
    lonely = [v for v in nodes if not any(u != v for u in g.adj[v])]
    if lonely:
        log.warning("vertices without neighbours get no layer arcs: %s", lonely)
    source, sink = 0, h * n + 1
    arcs = [(source, layer_vertex(n, i, 0)) for i in range(n)]
    arcs += [(layer_vertex(n, i, h - 1), sink) for i in range(n)]
    for z in range(h - 1):
        for i, j in edges:
            arcs += [
                (layer_vertex(n, i, z), layer_vertex(n, j, z + 1)),
                (layer_vertex(n, j, z), layer_vertex(n, i, z + 1)),
            ]
    pairs = []
    for i, j in edges:
        for x, y in combinations(range(h), 2):
            pairs += [
                RequiredPair(layer_vertex(n, i, x), layer_vertex(n, j, y)),
                RequiredPair(layer_vertex(n, j, x), layer_vertex(n, i, y)),
            ]
    try:
        dag = Dag(sink + 1, tuple(arcs), source, sink)
        return PcrpInstance(dag, tuple(pairs))
    except ValidationError as exc:
        raise DisconnectedOutput(f"layered graph has dead vertices: {exc}") from exc


def krpsp_layout(g: nx.Graph, h: int) -> dict:
    nodes = _nodes(g)
    n = len(nodes)
    return {
        "kind": "clique",
        "h": h,
        "nodes": [repr(v) for v in nodes],
        "source": 0,
        "sink": h * n + 1,
        "layers": [[layer_vertex(n, i, z) for i in range(n)] for z in range(h)],
    }


def clique_to_path(g: nx.Graph, h: int, clique: Iterable[Hashable], inst: PcrpInstance) -> StPath:
    nodes = _nodes(g)
    index = {v: k for k, v in enumerate(nodes)}
    members = sorted(set(clique), key=index.__getitem__)
    if len(members) != h or any(not g.has_edge(u, v) for u, v in combinations(members, 2)):
        raise NotAClique(f"{members!r} is not an {h}-clique")
    n = len(nodes)
    path = (inst.source, *(layer_vertex(n, index[v], z) for z, v in enumerate(members)), inst.sink)
    assert is_st_path(inst.dag, path)
    return path


def path_to_clique(g: nx.Graph, h: int, inst: PcrpInstance, path: Sequence[int]) -> frozenset[Hashable]:
    need = comb(h, 2)
    got = len(pairs_covered(inst, path))
    if got < need:
        raise NotEnoughPairs(f"path covers {got} pairs, {need} needed")
    nodes = _nodes(g)
    n = len(nodes)
    members = frozenset(nodes[(v - 1) % n] for v in path if v not in (inst.source, inst.sink))
    if len(members) != h or any(not g.has_edge(u, v) for u, v in combinations(members, 2)):
        raise NotAClique(f"path vertices {sorted(members, key=repr)!r} do not form an {h}-clique")
    return members


def brute_max_clique(g: nx.Graph, limit: int = CLIQUE_LIMIT) -> frozenset[Hashable]:
    """Branch and bound with a greedy-coloring upper bound."""
    nodes = _nodes(g)
    if len(nodes) > limit:
        raise SizeLimitExceeded(f"{len(nodes)} vertices exceed the limit of {limit}")
    index = {v: k for k, v in enumerate(nodes)}
    adj = [0] * len(nodes)
    for u, v in g.edges:
        if u != v:
            adj[index[u]] |= 1 << index[v]
            adj[index[v]] |= 1 << index[u]
    best: list[int] = []

    def color_bound(cand: int) -> list[tuple[int, int]]:
        """Greedy coloring of ``cand``; returns (vertex, color) in color order."""
        out: list[tuple[int, int]] = []
        color = 0
        left = cand
        while left:
            color += 1
            avail = left
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~adj[v] & ~(1 << v)
                left &= ~(1 << v)
                out.append((v, color))
        return out

    def expand(current: list[int], cand: int) -> None:
        nonlocal best
        for v, bound in reversed(color_bound(cand)):
            if len(current) + bound <= len(best):
                return
            current.append(v)
            nxt = cand & adj[v]
            if nxt:
                expand(current, nxt)
            elif len(current) > len(best):
                best = list(current)
            current.pop()
            cand &= ~(1 << v)

    expand([], (1 << len(nodes)) - 1)
    return frozenset(nodes[k] for k in best)
