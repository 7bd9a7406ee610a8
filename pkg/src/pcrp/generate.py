"""Seeded random instances and the serial-blocks family used for scaling runs."""

from __future__ import annotations

import random

from .graph import Dag
from .instance import PcrpInstance, RequiredPair, classify_overlap


def random_dag(n: int, density: float, rng: random.Random, layers: int | None = None) -> Dag:
    """Layered random DAG on ``n`` vertices with source 0 and sink ``n - 1``.

    Inner vertices get a random layer; each forward pair of vertices in
    distinct layers becomes an arc with probability ``density``.  Vertices
    left without an in- or out-arc get a fallback arc from an earlier layer
    or to a later one, which keeps every vertex on some st-path.
    """
    if n == 1:
        return Dag(1, (), 0, 0)
    inner = n - 2
    if layers is None:
        layers = max(1, rng.randint(1, max(1, inner)))
    layer = [0] + sorted(rng.randint(1, layers) for _ in range(inner)) + [layers + 1]
    arcs: set[tuple[int, int]] = set()
    for u in range(n):
        for v in range(u + 1, n):
            if layer[u] < layer[v] and rng.random() < density:
                arcs.add((u, v))
    has_in = {v for _, v in arcs}
    has_out = {u for u, _ in arcs}
    for v in range(1, n):
        if v not in has_in:
            earlier = [u for u in range(v) if layer[u] < layer[v]]
            arcs.add((rng.choice(earlier), v))
    has_out = {u for u, _ in arcs}
    for u in range(n - 1):
        if u not in has_out:
            later = [v for v in range(u + 1, n) if layer[v] > layer[u]]
            arcs.add((u, rng.choice(later)))
    return Dag(n, tuple(sorted(arcs)), 0, n - 1)


def random_pairs(
    dag: Dag,
    count: int,
    rng: random.Random,
    *,
    coverable_only: bool = True,
    max_degree: int | None = None,
    include_terminals: bool = False,
) -> list[RequiredPair]:
    """Draw up to ``count`` distinct pairs.

    With ``max_degree`` set, a candidate is rejected when it would push some
    pair's overlapping degree above the target.
    """
    reach = dag.reach
    pool = [
        v
        for v in range(dag.n)
        if include_terminals or v not in (dag.source, dag.sink)
    ]
    candidates = [
        (u, v)
        for i, u in enumerate(pool)
        for v in pool[i + 1 :]
        if not coverable_only or reach(u, v) or reach(v, u)
    ]
    rng.shuffle(candidates)
    chosen: list[RequiredPair] = []
    degree: list[int] = []
    for u, v in candidates:
        if len(chosen) == count:
            break
        pair = RequiredPair(u, v) if reach(u, v) or not reach(v, u) else RequiredPair(v, u)
        if max_degree is not None:
            hits = [
                k
                for k, q in enumerate(chosen)
                if (reach(pair.a, pair.b) and reach(q.a, q.b))
                and classify_overlap(pair, q, reach).overlaps
            ]
            if len(hits) > max_degree or any(degree[k] >= max_degree for k in hits):
                continue
            for k in hits:
                degree[k] += 1
            degree.append(len(hits))
        chosen.append(pair)
    return chosen


def serial_blocks_n(n: int, p: int) -> PcrpInstance:
    """As many serial blocks as fit in ``n`` vertices, padded to exactly ``n``."""
    blocks = (n - 1) // (4 * (p + 1) + 1)
    return serial_blocks(blocks, p, n)


def random_instance(
    n: int,
    n_pairs: int,
    *,
    density: float = 0.3,
    seed: int = 0,
    max_degree: int | None = None,
    coverable_only: bool = True,
) -> PcrpInstance:
    rng = random.Random(seed)
    dag = random_dag(n, density, rng)
    pairs = random_pairs(
        dag, n_pairs, rng, coverable_only=coverable_only, max_degree=max_degree
    )
    return PcrpInstance(dag, tuple(pairs))


def serial_blocks(blocks: int, p: int, n: int | None = None) -> PcrpInstance:
    """Blocks of ``p + 1`` mutually alternated pairs chained in series.

    Each block is a ladder: every pair vertex has an unpaired twin so the
    path may skip it, which keeps the st-path count exponential while the
    maximum overlapping degree stays exactly ``p``.  The optimum covers all
    ``blocks * (p + 1)`` pairs.  With ``n`` given, an unpaired tail is
    appended after the last block so the DAG has exactly ``n`` vertices.
    """
    width = p + 1
    arcs: list[tuple[int, int]] = []
    pairs: list[RequiredPair] = []
    nxt = 1
    hub = 0  # vertex every path crosses between blocks
    for _ in range(blocks):
        prev = [hub]
        rungs: list[int] = []
        for _ in range(2 * width):
            main, twin = nxt, nxt + 1
            nxt += 2
            for u in prev:
                arcs += [(u, main), (u, twin)]
            prev = [main, twin]
            rungs.append(main)
        hub = nxt
        nxt += 1
        arcs += [(prev[0], hub), (prev[1], hub)]
        pairs += [RequiredPair(rungs[k], rungs[k + width]) for k in range(width)]
    if n is not None:
        if n < nxt:
            raise ValueError(f"{blocks} blocks need {nxt} vertices, more than n = {n}")
        for v in range(nxt, n):
            arcs.append((hub, v))
            hub = v
        nxt = n
    dag = Dag(nxt, tuple(arcs), 0, hub)
    return PcrpInstance(dag, tuple(pairs))
