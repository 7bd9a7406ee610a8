"""DAG storage, orderings, reachability and path utilities.

Vertex sets are handled as Python ``int`` bitsets throughout: bit ``v`` set
means vertex ``v`` is a member.  Reachability rows are bitsets too, which
keeps comparability queries to a couple of integer operations.
"""

from __future__ import annotations

import heapq
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    ContractEndpoint,
    CycleDetected,
    NotReachable,
    PathBudgetExceeded,
    ValidationError,
)

Arc = tuple[int, int]
StPath = tuple[int, ...]


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class Dag:
    """Vertex/arc store with a designated source and sink.

    Construction checks ids and self-loops only; acyclicity and the
    source/sink reachability conditions are checked by :meth:`validate`,
    so a cyclic digraph can still be represented long enough to be
    collapsed by :func:`collapse_sccs`.
    """

    n: int
    arcs: tuple[Arc, ...]
    source: int
    sink: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError("graph needs at least one vertex")
        for v in (self.source, self.sink):
            if not 0 <= v < self.n:
                raise ValidationError(f"terminal {v} out of range")
        arcs = sorted(set((int(u), int(v)) for u, v in self.arcs))
        for u, v in arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValidationError(f"arc ({u},{v}) references unknown vertex")
            if u == v:
                raise ValidationError(f"self-loop on vertex {u}")
        object.__setattr__(self, "arcs", tuple(arcs))

    @cached_property
    def succ(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            out[u].append(v)
        return tuple(tuple(s) for s in out)

    @cached_property
    def pred(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            inc[v].append(u)
        return tuple(tuple(p) for p in inc)

    @cached_property
    def topo(self) -> TopoOrder:
        return topological_sort(self)

    @cached_property
    def reach(self) -> ReachabilityIndex:
        return transitive_closure(self)

    def validate(self) -> None:
        """Raise unless the graph is acyclic and every vertex lies on an st-path."""
        reach = self.reach  # raises CycleDetected
        everything = (1 << self.n) - 1
        missing = everything & ~reach.desc[self.source]
        if missing:
            raise ValidationError(
                f"source {self.source} does not reach vertex {next(bits(missing))}"
            )
        stuck = everything & ~reach.anc[self.sink]
        if stuck:
            raise ValidationError(
                f"vertex {next(bits(stuck))} does not reach sink {self.sink}"
            )


@dataclass(frozen=True)
class TopoOrder:
    order: tuple[int, ...]
    position: tuple[int, ...]


@dataclass(frozen=True)
class ReachabilityIndex:
    """Transitive closure stored as descendant and ancestor bitsets.

    ``desc[u]`` has bit ``v`` set iff a directed uv-path exists; every vertex
    reaches itself.
    """

    desc: tuple[int, ...]
    anc: tuple[int, ...]
    comparable: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "comparable", tuple(d | a for d, a in zip(self.desc, self.anc))
        )

    @property
    def n(self) -> int:
        return len(self.desc)

    def __call__(self, u: int, v: int) -> bool:
        return bool(self.desc[u] >> v & 1)

    @property
    def matrix(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=bool)
        for u, row in enumerate(self.desc):
            out[u, list(bits(row))] = True
        return out


def topological_sort(dag: Dag) -> TopoOrder:
    """Kahn's algorithm; among ready vertices the smallest id goes first."""
    indeg = [len(p) for p in dag.pred]
    ready = [v for v in range(dag.n) if indeg[v] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for v in dag.succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    if len(order) != dag.n:
        raise CycleDetected("arc set contains a directed cycle")
    position = [0] * dag.n
    for rank, v in enumerate(order):
        position[v] = rank
    return TopoOrder(tuple(order), tuple(position))


def transitive_closure(dag: Dag) -> ReachabilityIndex:
    order = dag.topo.order
    desc = [1 << v for v in range(dag.n)]
    for u in reversed(order):
        row = desc[u]
        for v in dag.succ[u]:
            row |= desc[v]
        desc[u] = row
    anc = [1 << v for v in range(dag.n)]
    for v in order:
        row = anc[v]
        for u in dag.pred[v]:
            row |= anc[u]
        anc[v] = row
    return ReachabilityIndex(tuple(desc), tuple(anc))


def collapse_sccs(
    n: int, arcs: Iterable[Arc], source: int, sink: int
) -> tuple[Dag, tuple[int, ...]]:
    """Contract every strongly connected component to a single vertex.

    Components are numbered by their smallest original member, so an
    acyclic input maps to itself.  Returns the quotient DAG and the map
    ``original vertex -> collapsed vertex``.
    """
    arcs = [(u, v) for u, v in arcs if u != v]
    rows = [u for u, _ in arcs]
    cols = [v for _, v in arcs]
    adj = csr_matrix((np.ones(len(arcs), dtype=np.int8), (rows, cols)), shape=(n, n))
    _, labels = connected_components(adj, directed=True, connection="strong")
    first_member: dict[int, int] = {}
    for v in range(n):
        first_member.setdefault(int(labels[v]), v)
    ranked = sorted(first_member, key=first_member.__getitem__)
    renumber = {label: k for k, label in enumerate(ranked)}
    vertex_map = tuple(renumber[int(labels[v])] for v in range(n))
    quotient = {
        (vertex_map[u], vertex_map[v]) for u, v in arcs if vertex_map[u] != vertex_map[v]
    }
    dag = Dag(len(ranked), tuple(quotient), vertex_map[source], vertex_map[sink])
    return dag, vertex_map


def contract_vertex(dag: Dag, v: int) -> Dag:
    """Remove ``v`` and bridge each in-neighbour to each out-neighbour.

    Vertices above ``v`` are shifted down by one to keep ids dense.
    """
    if v in (dag.source, dag.sink):
        raise ContractEndpoint(f"cannot contract terminal vertex {v}")
    arcs = {(a, b) for a, b in dag.arcs if v not in (a, b)}
    arcs.update((u, z) for u in dag.pred[v] for z in dag.succ[v])

    def shift(x: int) -> int:
        return x - 1 if x > v else x

    return Dag(
        dag.n - 1,
        tuple((shift(a), shift(b)) for a, b in arcs),
        shift(dag.source),
        shift(dag.sink),
    )


def is_chain(vertices: Iterable[int], reach: ReachabilityIndex) -> tuple[int, ...] | None:
    """Return ``vertices`` sorted along reachability, or ``None`` if two are incomparable.

    In a DAG a vertex set lies on a single path exactly when its members are
    pairwise comparable.
    """
    members = sorted(set(vertices))
    mask = to_mask(members)
    for v in members:
        if mask & ~reach.comparable[v]:
            return None
    # along a chain the ancestor count is strictly increasing
    return tuple(sorted(members, key=lambda v: reach.anc[v].bit_count()))


def chain_mask_ok(mask: int, reach: ReachabilityIndex) -> bool:
    for v in bits(mask):
        if mask & ~reach.comparable[v]:
            return False
    return True


def stitch_chain(dag: Dag, anchors: Sequence[int]) -> StPath:
    """Build an st-path visiting ``anchors`` in the given order.

    Between anchors the walk always steps to the successor of smallest
    topological rank that still reaches the next target.
    """
    reach = dag.reach
    position = dag.topo.position
    succ_by_rank = [sorted(s, key=position.__getitem__) for s in dag.succ]
    path = [dag.source]
    current = dag.source
    for target in (*anchors, dag.sink):
        if not reach(current, target):
            raise NotReachable(f"vertex {target} is not reachable from {current}")
        while current != target:
            current = next(w for w in succ_by_rank[current] if reach(w, target))
            path.append(current)
    return tuple(path)


def count_st_paths(dag: Dag) -> int:
    ways = [0] * dag.n
    ways[dag.sink] = 1
    for u in reversed(dag.topo.order):
        if u != dag.sink:
            ways[u] = sum(ways[v] for v in dag.succ[u])
    return ways[dag.source]


def enumerate_st_paths(dag: Dag, limit: int) -> Iterator[StPath]:
    """Yield every st-path, successors explored in ascending id order.

    Raises :class:`PathBudgetExceeded` as soon as a ``limit + 1``-th path
    turns up.
    """
    to_sink = dag.reach.anc[dag.sink]
    succ = [tuple(w for w in s if to_sink >> w & 1) for s in dag.succ]
    if not to_sink >> dag.source & 1:
        return
    produced = 0
    path = [dag.source]
    stack = [iter(succ[dag.source])]
    if dag.source == dag.sink:
        yield (dag.source,)
        return
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            path.pop()
            continue
        path.append(nxt)
        if nxt == dag.sink:
            produced += 1
            if produced > limit:
                raise PathBudgetExceeded(f"more than {limit} st-paths")
            yield tuple(path)
            path.pop()
        else:
            stack.append(iter(succ[nxt]))


def is_st_path(dag: Dag, path: Sequence[int]) -> bool:
    if not path or path[0] != dag.source or path[-1] != dag.sink:
        return False
    if len(set(path)) != len(path):
        return False
    arcs = set(dag.arcs)
    return all((u, v) in arcs for u, v in zip(path, path[1:]))
