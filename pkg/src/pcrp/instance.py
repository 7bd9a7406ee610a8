"""Problem instances: a DAG plus required pairs, and everything derived from them.

Pairs whose vertices are comparable are stored oriented, first vertex
reaching the second.  Pairs of incomparable vertices can never be covered;
they are kept so that callers can report them.
"""

from __future__ import annotations

import enum
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import MalformedPath, NotCoverable, ParseError, ValidationError
from .graph import Dag, ReachabilityIndex, StPath, bits, is_st_path

log = logging.getLogger(__name__)

MAGIC = "pcrp"
VERSION = "1"


class RequiredPair(NamedTuple):
    a: int
    b: int


class Overlap(enum.Enum):
    NONE = "none"
    ALTERNATED = "alternated"
    FIRST_INNER = "first-inner"  # first argument nested in the second
    SECOND_INNER = "second-inner"

    @property
    def overlaps(self) -> bool:
        return self is not Overlap.NONE


def coverable(pair: Sequence[int], reach: ReachabilityIndex) -> bool:
    a, b = pair
    return reach(a, b) or reach(b, a)


def classify_overlap(
    p: Sequence[int], q: Sequence[int], reach: ReachabilityIndex
) -> Overlap:
    """Decide how two oriented pairs overlap.

    The pairs overlap when their four vertices lie on one path and the
    spans they cut out of it share more than a single vertex; a pair that
    ends where the other starts does not overlap it.
    """
    if not coverable(p, reach):
        raise NotCoverable(f"pair {tuple(p)} lies on no path")
    if not coverable(q, reach):
        raise NotCoverable(f"pair {tuple(q)} lies on no path")
    pa, pb = p
    qa, qb = q
    members = {pa, pb, qa, qb}
    for v in members:
        for w in members:
            if not reach.comparable[v] >> w & 1:
                return Overlap.NONE
    # rank along the chain = number of ancestors
    rank = {v: reach.anc[v].bit_count() for v in members}
    pa, pb = sorted((pa, pb), key=rank.__getitem__)
    qa, qb = sorted((qa, qb), key=rank.__getitem__)
    if max(rank[pa], rank[qa]) >= min(rank[pb], rank[qb]):
        return Overlap.NONE
    if rank[pa] <= rank[qa] and rank[qb] <= rank[pb]:
        return Overlap.SECOND_INNER
    if rank[qa] <= rank[pa] and rank[pb] <= rank[qb]:
        return Overlap.FIRST_INNER
    return Overlap.ALTERNATED


@dataclass(frozen=True)
class PcrpInstance:
    dag: Dag
    pairs: tuple[RequiredPair, ...]

    def __post_init__(self) -> None:
        self.dag.validate()
        reach = self.dag.reach
        seen: set[frozenset[int]] = set()
        normalized: list[RequiredPair] = []
        for x, y in self.pairs:
            x, y = int(x), int(y)
            if not (0 <= x < self.dag.n and 0 <= y < self.dag.n):
                raise ValidationError(f"pair ({x},{y}) references unknown vertex")
            if x == y:
                raise ValidationError(f"self-pair ({x},{y})")
            key = frozenset((x, y))
            if key in seen:
                log.warning("duplicate pair (%d,%d) merged", x, y)
                continue
            seen.add(key)
            if reach(y, x):
                x, y = y, x
            normalized.append(RequiredPair(x, y))
        object.__setattr__(self, "pairs", tuple(normalized))

    @property
    def n(self) -> int:
        return self.dag.n

    @property
    def source(self) -> int:
        return self.dag.source

    @property
    def sink(self) -> int:
        return self.dag.sink

    @property
    def reach(self) -> ReachabilityIndex:
        return self.dag.reach

    def with_pairs(self, pairs: Iterable[Sequence[int]]) -> PcrpInstance:
        return PcrpInstance(self.dag, tuple(RequiredPair(*p) for p in pairs))

    @cached_property
    def uncoverable(self) -> tuple[RequiredPair, ...]:
        return tuple(p for p in self.pairs if not coverable(p, self.reach))

    def coverable_only(self) -> PcrpInstance:
        if not self.uncoverable:
            return self
        log.warning(
            "dropping %d uncoverable pair(s): %s",
            len(self.uncoverable),
            " ".join(f"({a},{b})" for a, b in self.uncoverable),
        )
        return self.with_pairs(p for p in self.pairs if coverable(p, self.reach))

    @cached_property
    def _overlap_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        """All-pairs version of :func:`classify_overlap`: (overlaps, nested-in)."""
        if self.uncoverable:
            raise NotCoverable(f"pair {tuple(self.uncoverable[0])} lies on no path")
        m = len(self.pairs)
        if not m:
            empty = np.zeros((0, 0), dtype=bool)
            return empty, empty
        reach = self.reach.matrix
        comparable = reach | reach.T | np.eye(self.n, dtype=bool)
        first = np.array([p.a for p in self.pairs])
        second = np.array([p.b for p in self.pairs])
        on_chain = (
            comparable[np.ix_(first, first)]
            & comparable[np.ix_(first, second)]
            & comparable[np.ix_(second, first)]
            & comparable[np.ix_(second, second)]
        )
        rank = np.array([a.bit_count() for a in self.reach.anc])
        ra, rb = rank[first], rank[second]
        spans_meet = np.maximum.outer(ra, ra) < np.minimum.outer(rb, rb)
        overlaps = on_chain & spans_meet & ~np.eye(m, dtype=bool)
        # nested[i, h]: pair h sits inside pair i
        nested = overlaps & (ra[:, None] <= ra[None, :]) & (rb[None, :] <= rb[:, None])
        return overlaps, nested

    @cached_property
    def overlap_masks(self) -> tuple[int, ...]:
        """Bitset over pair indices of the pairs overlapping each pair (self excluded)."""
        return _row_masks(self._overlap_matrices[0])

    @cached_property
    def nested_masks(self) -> tuple[int, ...]:
        """``nested_masks[i]`` has bit ``h`` set iff pair ``h`` is nested in pair ``i``."""
        return _row_masks(self._overlap_matrices[1])


def _row_masks(matrix: np.ndarray) -> tuple[int, ...]:
    return tuple(
        int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little") for row in matrix
    )


def overlap_degree(pair_index: int, inst: PcrpInstance) -> int:
    return inst.overlap_masks[pair_index].bit_count()


def max_overlap_degree(inst: PcrpInstance) -> int:
    return max((m.bit_count() for m in inst.overlap_masks), default=0)


def augment_trivial_pairs(inst: PcrpInstance) -> PcrpInstance:
    """Pair the source with every inner vertex that belongs to no pair."""
    used = {v for p in inst.pairs for v in p}
    extra = [
        RequiredPair(inst.source, v)
        for v in range(inst.n)
        if v not in used and v not in (inst.source, inst.sink)
    ]
    if not extra:
        return inst
    return PcrpInstance(inst.dag, inst.pairs + tuple(extra))


@dataclass(frozen=True)
class PairOrdering:
    """Pairs ranked so that a pair never precedes one it could be passed by.

    Rank 0 is the fictitious pair ending at the source; ``ranked[r - 1]`` is
    the index (into ``inst.pairs``) of the pair of rank ``r``.
    """

    ranked: tuple[int, ...]
    source: int
    pairs: tuple[RequiredPair, ...]

    def __len__(self) -> int:
        return len(self.ranked) + 1

    def pair(self, rank: int) -> RequiredPair | None:
        return None if rank == 0 else self.pairs[self.ranked[rank - 1]]

    def second(self, rank: int) -> int:
        return self.source if rank == 0 else self.pairs[self.ranked[rank - 1]].b

    @cached_property
    def rank_of(self) -> dict[int, int]:
        return {idx: r + 1 for r, idx in enumerate(self.ranked)}


def order_pairs(inst: PcrpInstance) -> PairOrdering:
    """Sort pairs by the topological rank of their second vertex.

    Pairs sharing the second vertex go inner-first (later first vertex
    first), which is what keeps an earlier pair nested in a later one.
    """
    if inst.uncoverable:
        raise NotCoverable(f"pair {tuple(inst.uncoverable[0])} lies on no path")
    pos = inst.dag.topo.position
    ranked = sorted(
        range(len(inst.pairs)),
        key=lambda i: (pos[inst.pairs[i].b], -pos[inst.pairs[i].a], i),
    )
    return PairOrdering(tuple(ranked), inst.source, inst.pairs)


def op_set(rank: int, inst: PcrpInstance, ordering: PairOrdering) -> frozenset[int]:
    """Vertices of pairs overlapping the ranked pair that can still reach its end.

    Always contains the pair's own first vertex; empty for rank 0.
    """
    if rank == 0:
        return frozenset()
    idx = ordering.ranked[rank - 1]
    a, b = inst.pairs[idx]
    to_b = inst.reach.anc[b]
    out = {a}
    for h in bits(inst.overlap_masks[idx]):
        out.update(v for v in inst.pairs[h] if to_b >> v & 1)
    return frozenset(out)


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    k: int
    uncovered_vertices: tuple[int, ...]
    uncovered_pairs: tuple[RequiredPair, ...]


def verify_solution(
    inst: PcrpInstance, paths: Sequence[Sequence[int]], mode: str = "cover-all"
) -> VerificationReport:
    if mode not in ("cover-all", "pairs-only"):
        raise ValueError(f"unknown verification mode {mode!r}")
    on_some_path = 0
    on_path_masks = []
    for k, path in enumerate(paths):
        if not is_st_path(inst.dag, path):
            raise MalformedPath(f"path {k} is not an st-path: {tuple(path)}")
        mask = 0
        for v in path:
            mask |= 1 << v
        on_path_masks.append(mask)
        on_some_path |= mask
    uncovered_vertices: tuple[int, ...] = ()
    if mode == "cover-all":
        uncovered_vertices = tuple(v for v in range(inst.n) if not on_some_path >> v & 1)
    uncovered_pairs = tuple(
        p
        for p in inst.pairs
        if not any(m >> p.a & 1 and m >> p.b & 1 for m in on_path_masks)
    )
    return VerificationReport(
        valid=not uncovered_vertices and not uncovered_pairs,
        k=len(paths),
        uncovered_vertices=uncovered_vertices,
        uncovered_pairs=uncovered_pairs,
    )


def pairs_covered(inst: PcrpInstance, path: Iterable[int]) -> tuple[RequiredPair, ...]:
    on = set(path)
    return tuple(p for p in inst.pairs if p.a in on and p.b in on)


# ---------------------------------------------------------------- text format


class RawInstance(NamedTuple):
    """Parsed file contents before any graph validation."""

    n: int
    source: int
    sink: int
    arcs: tuple[tuple[int, int], ...]
    pairs: tuple[tuple[int, int], ...]


def _ints(fields: list[str], lineno: int) -> list[int]:
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(fields)!r}", lineno) from None


def parse_raw(text: str) -> RawInstance:
    header: tuple[int, int, int] | None = None
    magic_seen = False
    arcs: list[tuple[int, int]] = []
    pairs: list[tuple[int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if not magic_seen:
            if fields != [MAGIC, VERSION]:
                raise ParseError(f"expected '{MAGIC} {VERSION}' header", lineno)
            magic_seen = True
            continue
        if header is None:
            if len(fields) != 6 or fields[0::2] != ["n", "s", "t"]:
                raise ParseError("expected 'n <count> s <source> t <sink>'", lineno)
            n, s, t = _ints(fields[1::2], lineno)
            if n < 1:
                raise ParseError("vertex count must be positive", lineno)
            for v in (s, t):
                if not 0 <= v < n:
                    raise ParseError(f"terminal {v} outside 0..{n - 1}", lineno)
            header = (n, s, t)
            continue
        tag, rest = fields[0], fields[1:]
        if tag not in ("a", "p") or len(rest) != 2:
            raise ParseError(f"unrecognized line {line!r}", lineno)
        u, v = _ints(rest, lineno)
        for x in (u, v):
            if not 0 <= x < header[0]:
                raise ParseError(f"unknown vertex id {x}", lineno)
        (arcs if tag == "a" else pairs).append((u, v))
    if header is None:
        raise ParseError("missing header")
    return RawInstance(header[0], header[1], header[2], tuple(arcs), tuple(pairs))


def parse_instance(text: str) -> PcrpInstance:
    raw = parse_raw(text)
    for u, v in raw.arcs:
        if u == v:
            raise ValidationError(f"self-loop on vertex {u}")
    dag = Dag(raw.n, raw.arcs, raw.source, raw.sink)
    return PcrpInstance(dag, tuple(RequiredPair(*p) for p in raw.pairs))


def write_instance(inst: PcrpInstance) -> str:
    lines = [f"{MAGIC} {VERSION}", f"n {inst.n} s {inst.source} t {inst.sink}"]
    lines += [f"a {u} {v}" for u, v in sorted(inst.dag.arcs)]
    lines += [f"p {a} {b}" for a, b in sorted(inst.pairs)]
    return "\n".join(lines) + "\n"


def write_solution(paths: Sequence[StPath]) -> str:
    lines = [f"k {len(paths)}"] + [" ".join(map(str, p)) for p in paths]
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> list[StPath]:
    lines = [
        (no, ln.split("#", 1)[0].strip())
        for no, ln in enumerate(text.splitlines(), start=1)
    ]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines or lines[0][1].split()[0] != "k":
        raise ParseError("expected 'k <count>' header", lines[0][0] if lines else None)
    no, head = lines[0]
    fields = head.split()
    if len(fields) != 2:
        raise ParseError("expected 'k <count>' header", no)
    (k,) = _ints(fields[1:], no)
    paths = [tuple(_ints(ln.split(), no)) for no, ln in lines[1:]]
    if len(paths) != k:
        raise ParseError(f"header announces {k} paths, found {len(paths)}", no)
    return paths
