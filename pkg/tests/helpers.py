"""Tiny hand-made DAGs and hypothesis strategies shared by the tests."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from pcrp import Dag, PcrpInstance, RequiredPair
from pcrp.generate import random_dag, random_pairs


def chain(n: int) -> Dag:
    return Dag(n, tuple((v, v + 1) for v in range(n - 1)), 0, n - 1)


def diamond() -> Dag:
    return Dag(4, ((0, 1), (0, 2), (1, 3), (2, 3)), 0, 3)


def branches(k: int) -> Dag:
    """``k`` parallel branches ``s -> a_i -> t`` with s = 0 and t = k + 1."""
    t = k + 1
    arcs = [(0, a) for a in range(1, t)] + [(a, t) for a in range(1, t)]
    return Dag(k + 2, tuple(arcs), 0, t)


def branch_instance(k: int) -> PcrpInstance:
    return PcrpInstance(branches(k), tuple(RequiredPair(0, a) for a in range(1, k + 1)))


def seeded_instance(seed: int, n_max: int = 10, pairs_max: int = 6) -> PcrpInstance:
    rng = random.Random(seed)
    n = rng.randint(2, n_max)
    dag = random_dag(n, rng.uniform(0.15, 0.8), rng)
    pairs = random_pairs(dag, rng.randint(0, pairs_max), rng, include_terminals=rng.random() < 0.3)
    return PcrpInstance(dag, tuple(pairs))


@st.composite
def dags(draw, min_n: int = 2, max_n: int = 9) -> Dag:
    """DAGs on ``0..n-1`` whose arcs point up in id order; every vertex lies on an st-path."""
    n = draw(st.integers(min_n, max_n))
    candidates = [(u, v) for u in range(n) for v in range(u + 1, n)]
    arcs = set(draw(st.lists(st.sampled_from(candidates), max_size=3 * n, unique=True)) if candidates else [])
    for v in range(1, n):
        if not any(w == v for _, w in arcs):
            arcs.add((0, v))
    for u in range(n - 1):
        if not any(w == u for w, _ in arcs):
            arcs.add((u, n - 1))
    return Dag(n, tuple(arcs), 0, n - 1)


@st.composite
def instances(draw, min_n: int = 3, max_n: int = 9, max_pairs: int = 6) -> PcrpInstance:
    dag = draw(dags(min_n, max_n))
    reach = dag.reach
    options = [(u, v) for u in range(dag.n) for v in range(dag.n) if u != v and reach(u, v)]
    if not options:
        return PcrpInstance(dag, ())
    chosen = draw(st.lists(st.sampled_from(options), max_size=max_pairs, unique_by=lambda p: frozenset(p)))
    return PcrpInstance(dag, tuple(RequiredPair(*p) for p in chosen))

