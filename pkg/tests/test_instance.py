import logging

import networkx as nx
import pytest
from hypothesis import given, settings

from pcrp import (
    MalformedPath,
    NotCoverable,
    Overlap,
    ParseError,
    PcrpInstance,
    RequiredPair,
    ValidationError,
    augment_trivial_pairs,
    classify_overlap,
    enumerate_st_paths,
    gen_krpsp,
    max_overlap_degree,
    op_set,
    order_pairs,
    overlap_degree,
    parse_instance,
    parse_solution,
    verify_solution,
    write_instance,
    write_solution,
)
from pcrp.instance import coverable

from .helpers import chain, diamond, instances, seeded_instance

CHAIN_FILE = """pcrp 1
# five vertices in a row
n 5 s 0 t 4
a 0 1
a 1 2
a 2 3
a 3 4
p 1 3
"""


def test_parse_chain_file():
    inst = parse_instance(CHAIN_FILE)
    assert inst.n == 5 and inst.pairs == (RequiredPair(1, 3),)


def test_self_pair_rejected():
    with pytest.raises(ValidationError, match="self-pair"):
        parse_instance(CHAIN_FILE + "p 1 1\n")


def test_unknown_vertex_is_parse_error():
    with pytest.raises(ParseError) as info:
        parse_instance(CHAIN_FILE.replace("a 3 4", "a 3 9"))
    assert info.value.line == 7


@pytest.mark.parametrize(
    "text",
    ["", "pcrp 2\nn 2 s 0 t 1\n", "pcrp 1\nn 2 s 0\n", "pcrp 1\nn 2 s 0 t 1\nx 0 1\n", "pcrp 1\nn 2 s 0 t 1\na 0 one\n"],
)
def test_malformed_files(text):
    with pytest.raises(ParseError):
        parse_instance(text)


def test_duplicate_pairs_merged(caplog):
    with caplog.at_level(logging.WARNING):
        inst = PcrpInstance(chain(5), ((1, 3), (3, 1), (1, 3)))
    assert inst.pairs == (RequiredPair(1, 3),)
    assert "duplicate" in caplog.text


def test_pairs_are_oriented():
    inst = PcrpInstance(chain(5), ((3, 1),))
    assert inst.pairs == (RequiredPair(1, 3),)


@given(instances())
@settings(max_examples=60)
def test_write_parse_round_trip(inst):
    text = write_instance(inst)
    again = parse_instance(text)
    assert write_instance(again) == text
    assert set(again.pairs) == set(inst.pairs)


def test_augment_trivial_pairs():
    inst = PcrpInstance(chain(4), ((1, 2),))
    assert augment_trivial_pairs(inst) is inst
    out = augment_trivial_pairs(PcrpInstance(diamond(), ()))
    assert set(out.pairs) == {RequiredPair(0, 1), RequiredPair(0, 2)}
    assert augment_trivial_pairs(out).pairs == out.pairs


def test_coverable_examples():
    assert coverable((1, 3), chain(5).reach)
    assert not coverable((1, 2), diamond().reach)


@pytest.mark.parametrize("seed", range(15))
def test_coverable_matches_paths(seed):
    inst = seeded_instance(seed)
    paths = [set(p) for p in enumerate_st_paths(inst.dag, 10**5)]
    for u in range(inst.n):
        for v in range(inst.n):
            if u != v:
                assert coverable((u, v), inst.reach) == any({u, v} <= p for p in paths)


def test_classify_overlap_examples():
    reach = chain(6).reach
    assert classify_overlap((1, 3), (2, 4), reach) is Overlap.ALTERNATED
    assert classify_overlap((1, 4), (2, 3), reach) is Overlap.SECOND_INNER
    assert classify_overlap((2, 3), (1, 4), reach) is Overlap.FIRST_INNER
    assert classify_overlap((1, 2), (2, 3), reach) is Overlap.NONE
    with pytest.raises(NotCoverable):
        classify_overlap((1, 2), (0, 3), diamond().reach)


def brute_overlap(p, q, dag) -> bool:
    """Two pairs overlap iff some st-path holds all four vertices and their spans share an arc."""
    for path in enumerate_st_paths(dag, 10**5):
        pos = {v: k for k, v in enumerate(path)}
        if all(v in pos for v in (*p, *q)):
            lo = max(min(pos[p[0]], pos[p[1]]), min(pos[q[0]], pos[q[1]]))
            hi = min(max(pos[p[0]], pos[p[1]]), max(pos[q[0]], pos[q[1]]))
            return lo < hi
    return False


@pytest.mark.parametrize("seed", range(25))
def test_overlap_matches_paths(seed):
    inst = seeded_instance(seed, pairs_max=8)
    for i, p in enumerate(inst.pairs):
        for j, q in enumerate(inst.pairs):
            if i != j:
                got = classify_overlap(p, q, inst.reach).overlaps
                assert got == brute_overlap(p, q, inst.dag)
                assert got == bool(inst.overlap_masks[i] >> j & 1)


def test_overlap_degree_examples():
    inst = PcrpInstance(chain(6), ((1, 3), (2, 4)))
    assert overlap_degree(0, inst) == overlap_degree(1, inst) == 1
    assert max_overlap_degree(inst) == 1
    serial = PcrpInstance(chain(6), ((0, 1), (2, 3), (4, 5)))
    assert max_overlap_degree(serial) == 0


def test_clique_instance_twins_have_equal_degree():
    inst = gen_krpsp(nx.complete_graph(3), 3)
    index = {p: k for k, p in enumerate(inst.pairs)}
    n = 3
    def layer_of(v):
        return (v - 1) // n, (v - 1) % n
    for (a, b), k in index.items():
        (x, i), (y, j) = layer_of(a), layer_of(b)
        twin = RequiredPair(1 + x * n + j, 1 + y * n + i)
        assert overlap_degree(k, inst) == overlap_degree(index[twin], inst)
    assert max_overlap_degree(inst) > 0


def test_order_pairs_examples():
    inst = PcrpInstance(chain(6), ((2, 4), (1, 3)))
    ordering = order_pairs(inst)
    assert ordering.pair(1) == (1, 3) and ordering.pair(2) == (2, 4)
    nested = PcrpInstance(chain(6), ((1, 4), (2, 3)))
    assert order_pairs(nested).pair(1) == (2, 3)
    single = PcrpInstance(chain(3), ((0, 2),))
    assert order_pairs(single).rank_of == {0: 1}


def test_shared_second_vertex_goes_inner_first():
    inst = PcrpInstance(chain(5), ((1, 4), (2, 4)))
    ordering = order_pairs(inst)
    assert ordering.pair(1) == (2, 4) and ordering.pair(2) == (1, 4)


@given(instances())
@settings(max_examples=60)
def test_nested_pairs_rank_before_their_host(inst):
    ordering = order_pairs(inst)
    rank = ordering.rank_of
    for i, mask in enumerate(inst.nested_masks):
        for h in range(len(inst.pairs)):
            if mask >> h & 1:
                assert rank[h] < rank[i]


def test_op_set_examples():
    inst = PcrpInstance(chain(6), ((1, 3), (2, 4)))
    ordering = order_pairs(inst)
    assert op_set(1, inst, ordering) == {1, 2}
    assert op_set(2, inst, ordering) == {1, 2, 3}
    lone = PcrpInstance(chain(6), ((1, 2), (3, 4)))
    assert op_set(1, lone, order_pairs(lone)) == {1}
    nested = PcrpInstance(chain(6), ((1, 4), (2, 3)))
    assert op_set(2, nested, order_pairs(nested)) == {1, 2, 3}
    assert op_set(0, nested, order_pairs(nested)) == frozenset()


def test_verify_examples():
    inst = PcrpInstance(chain(4), ((1, 2),))
    assert verify_solution(inst, [(0, 1, 2, 3)]).valid
    inst = PcrpInstance(diamond(), ((0, 1), (0, 2)))
    report = verify_solution(inst, [(0, 1, 3)])
    assert not report.valid
    assert report.uncovered_vertices == (2,)
    assert report.uncovered_pairs == (RequiredPair(0, 2),)
    assert not verify_solution(inst, [(0, 1, 3)], "pairs-only").valid
    assert verify_solution(PcrpInstance(diamond(), ((0, 1),)), [(0, 1, 3)], "pairs-only").valid
    with pytest.raises(MalformedPath):
        verify_solution(inst, [(0, 3)])


def test_solution_round_trip():
    paths = [(0, 1, 3), (0, 2, 3)]
    assert parse_solution(write_solution(paths)) == paths
    with pytest.raises(ParseError):
        parse_solution("k 3\n0 1 3\n")


@given(instances())
@settings(max_examples=40)
def test_vectorized_masks_match_classifier(inst):
    for i, p in enumerate(inst.pairs):
        for j, q in enumerate(inst.pairs):
            if i == j:
                continue
            kind = classify_overlap(p, q, inst.reach)
            assert bool(inst.overlap_masks[i] >> j & 1) == kind.overlaps
            assert bool(inst.nested_masks[i] >> j & 1) == (kind is Overlap.SECOND_INNER)

