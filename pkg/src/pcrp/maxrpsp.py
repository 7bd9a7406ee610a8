"""Single path covering the most required pairs.

:func:`max_rpsp_dp` is the dynamic program parameterized by the maximum
overlapping degree ``p``; :func:`max_rpsp_bruteforce` enumerates st-paths
and serves as its oracle.

Each pair rank ``i`` owns a table over subsets ``S`` of its OP set,
encoded with one bit per OP vertex in ascending vertex order.  Only subsets
whose vertices are pairwise comparable can lie on a path, so the table lists
exactly those (sorted) next to their values.  Entry ``S`` holds the best
number of pairs covered by a path ending at the second vertex of pair ``i``
that visits every vertex of ``S``; ``-1`` marks states no path realizes.
With ``|OP(i)| <= 2p + 1`` a table has at most ``2**(2p + 1)`` entries.  Back-pointers are not stored: the witness is rebuilt by
re-evaluating the winning transition of each state with the scalar code
path, which also cross-checks the vectorized one.
"""

from __future__ import annotations

from collections.abc import Collection
from dataclasses import dataclass

import numpy as np

from .errors import PathBudgetExceeded
from .graph import StPath, bits, chain_mask_ok, enumerate_st_paths, stitch_chain, to_mask
from .instance import (
    PairOrdering,
    PcrpInstance,
    RequiredPair,
    max_overlap_degree,
    op_set,
    order_pairs,
    pairs_covered,
)

UNREACHED = -1


def agreement(s: Collection[int], s_prime: Collection[int], op_i: Collection[int], op_j: Collection[int]) -> bool:
    """True iff ``S`` and ``S'`` contain the same vertices of ``OP(i) & OP(j)``."""
    shared = set(op_i) & set(op_j)
    return set(s) & shared == set(s_prime) & shared


@dataclass(frozen=True)
class DpState:
    rank: int
    subset: frozenset[int]


@dataclass
class DpTable:
    """Per-rank OP vertex lists, sorted chain subsets and their values."""

    op: list[tuple[int, ...]]
    subsets: list[np.ndarray]
    value: list[np.ndarray]

    @property
    def state_count(self) -> int:
        return int(sum(np.count_nonzero(v >= 0) for v in self.value))

    def get(self, rank: int, subset: Collection[int]) -> int:
        local = sum(1 << self.op[rank].index(v) for v in subset)
        return _lookup(self.subsets[rank], self.value[rank], local)


def _lookup(subsets: np.ndarray, values: np.ndarray, local: int) -> int:
    pos = int(np.searchsorted(subsets, local))
    if pos < len(subsets) and subsets[pos] == local:
        return int(values[pos])
    return UNREACHED


@dataclass(frozen=True)
class MaxRpspResult:
    count: int
    path: StPath
    covered: tuple[RequiredPair, ...]
    p: int
    state_count: int


def _compact(subsets: np.ndarray, mask: int) -> np.ndarray:
    """Squeeze the bits of ``mask`` out of every subset into a dense index."""
    positions = np.fromiter(bits(mask), dtype=np.int64)
    return ((subsets[:, None] >> positions) & 1) @ (np.int64(1) << np.arange(len(positions), dtype=np.int64))


@dataclass(frozen=True)
class _GainParts:
    bits: tuple[int, ...]
    inner: np.ndarray
    at_end: np.ndarray
    has_end: np.ndarray
    end_local: int


class _Recurrence:
    """Per-rank data shared by the vectorized table fill and the scalar replay."""

    def __init__(self, inst: PcrpInstance, ordering: PairOrdering):
        self.inst = inst
        self.ordering = ordering
        reach = inst.reach
        self.desc = reach.desc
        self.m = len(ordering) - 1
        self.second = [ordering.second(r) for r in range(self.m + 1)]
        self.op = [tuple(sorted(op_set(r, inst, ordering))) for r in range(self.m + 1)]
        self.op_mask = [to_mask(op) for op in self.op]
        self.local = [{v: t for t, v in enumerate(op)} for op in self.op]
        rank_of = ordering.rank_of
        self.nested_ranks = [0] * (self.m + 1)
        # (first, second) of the pair itself and of each pair nested in it
        self.credit: list[list[tuple[int, int]]] = [[]]
        for r in range(1, self.m + 1):
            idx = ordering.ranked[r - 1]
            nested = inst.nested_masks[idx]
            self.credit.append([tuple(inst.pairs[h]) for h in (idx, *bits(nested))])
            for h in bits(nested):
                self.nested_ranks[r] |= 1 << rank_of[h]
        self.subsets = [self._chain_subsets(r) for r in range(self.m + 1)]
        self._projections: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}

    def _chain_subsets(self, r: int) -> np.ndarray:
        """Sorted local masks of every subset of ``OP(r)`` that forms a chain."""
        comparable = self.inst.reach.comparable
        found = np.zeros(1, dtype=np.int64)
        for t, v in enumerate(self.op[r]):
            comp_local = sum(1 << u for u, w in enumerate(self.op[r][:t]) if comparable[v] >> w & 1)
            grown = found[(found & ~comp_local) == 0] | (1 << t)
            found = np.concatenate([found, grown])
        return found

    def is_chain_local(self, r: int, local: int) -> bool:
        return chain_mask_ok(sum(1 << self.op[r][t] for t in bits(local)), self.inst.reach)

    def predecessors(self, i: int) -> list[int]:
        end = self.second[i]
        return [
            j
            for j in range(i)
            if not self.nested_ranks[i] >> j & 1 and self.desc[self.second[j]] >> end & 1
        ]

    def leg_data(self, j: int, i: int) -> tuple[int, int, int, bool]:
        """Local masks for the leg from the end of ``j`` to the end of ``i``.

        Returns (shared OP bits, OP bits reachable from the start of the leg,
        local bit of the leg start or -1, whether both legs end alike).
        """
        start = self.second[j]
        shared = reach_ok = 0
        for t, v in enumerate(self.op[i]):
            if self.op_mask[j] >> v & 1:
                shared |= 1 << t
            if self.desc[start] >> v & 1:
                reach_ok |= 1 << t
        return shared, reach_ok, self.local[i].get(start, -1), start == self.second[i]

    def ov_terms(self, i: int) -> list[tuple[int, int]]:
        """(local bit of first vertex, local bit of second vertex or -1 for the endpoint)."""
        end = self.second[i]
        loc = self.local[i]
        return [(loc[a], -1 if b == end and b not in loc else loc[b]) for a, b in self.credit[i]]

    # ---------------------------------------------------------- scalar path

    def transition(self, j: int, i: int, s: int, value_j: np.ndarray) -> tuple[int, int]:
        """Best value reaching state ``(i, S)`` from rank ``j`` and the ``S'`` achieving it."""
        shared, reach_ok, start_bit, same_end = self.leg_data(j, i)
        leg = s & ~shared
        if leg & ~reach_ok or not self.is_chain_local(i, leg):
            return UNREACHED, -1
        # agreement: S' must hold exactly the shared vertices S holds
        shared_j = want = 0
        for t in bits(shared):
            bit = 1 << self.local[j][self.op[i][t]]
            shared_j |= bit
            if s >> t & 1:
                want |= bit
        sp_all = self.subsets[j]
        agree = np.flatnonzero(((sp_all & shared_j) == want) & (value_j >= 0))
        if not len(agree):
            return UNREACHED, -1
        # first maximum in ascending S' order
        pick = int(agree[np.argmax(value_j[agree])])
        best = int(value_j[pick])
        return best + self._ov_scalar(i, s, shared, leg, start_bit, same_end), int(sp_all[pick])

    def _ov_scalar(self, i: int, s: int, shared: int, leg: int, start_bit: int, same_end: bool) -> int:
        end_local = self.local[i].get(self.second[i], -1)
        count = 0
        for a, b in self.ov_terms(i):
            if not s >> a & 1:
                continue
            if b == -1 or b == end_local:
                new = not same_end and not (b >= 0 and (s & shared) >> b & 1)
            else:
                new = bool(leg >> b & 1) and b != start_bit
            count += new
        return count

    # ------------------------------------------------------ vectorized path

    def fill(self, i: int, values: list[np.ndarray]) -> np.ndarray:
        subsets = self.subsets[i]
        best = np.full(len(subsets), UNREACHED, dtype=np.int64)
        parts = self._gain_parts(i, subsets)
        wanted: dict[int, np.ndarray] = {}
        # a candidate only grows with its base, so predecessors sharing the same
        # leg facts are merged first: by best value when nothing is shared,
        # otherwise by the elementwise best of their projected tables
        bases: dict[tuple[int, int, int, bool], np.ndarray | np.int64] = {}
        for j in self.predecessors(i):
            top = int(values[j].max())
            if top < 0:
                continue
            shared, reach_ok, start_bit, same_end = key = self.leg_data(j, i)
            if shared == 0:
                bases[key] = max(bases.get(key, UNREACHED), np.int64(top))
                continue
            shared_j = sum(1 << self.local[j][self.op[i][t]] for t in bits(shared))
            uniq, tops = self._projection(j, shared_j, values[j])
            if shared not in wanted:
                wanted[shared] = _compact(subsets, shared)
            want = wanted[shared]
            pos = np.minimum(np.searchsorted(uniq, want), len(uniq) - 1)
            base = np.where(uniq[pos] == want, tops[pos], UNREACHED)
            if key in bases:
                np.maximum(bases[key], base, out=bases[key])
            else:
                bases[key] = base
        for (shared, reach_ok, start_bit, same_end), base in bases.items():
            cand = self._candidates(parts, subsets, base, shared, reach_ok, start_bit, same_end)
            np.maximum(best, cand, out=best)
        return best

    def _projection(self, j: int, shared_j: int, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Best value of ``j`` per pattern on the shared vertices, as sorted keys and maxima.

        A finished table never changes, so the result is memoized per
        ``(j, shared_j)``; later ranks often share the same vertices with ``j``.
        """
        hit = self._projections.get((j, shared_j))
        if hit is not None:
            return hit
        live = values >= 0
        keys = _compact(self.subsets[j][live], shared_j)
        order = np.argsort(keys, kind="stable")
        keys, vals = keys[order], values[live][order]
        starts = np.flatnonzero(np.concatenate(([True], keys[1:] != keys[:-1])))
        hit = self._projections[j, shared_j] = (keys[starts], np.maximum.reduceat(vals, starts))
        return hit

    def _gain_parts(self, i: int, subsets: np.ndarray) -> _GainParts:
        """Split the credit of every ``S`` by the local bit of each pair's second vertex.

        For inner second vertices, row ``b`` of ``inner`` counts credited pairs
        whose both vertices are in ``S``; a predecessor then only decides which
        rows are new on its leg.  Pairs ending at the endpoint of ``i`` are
        summed separately since they depend on the leg only through
        ``same_end`` and whether the endpoint is shared.
        """
        end_local = self.local[i].get(self.second[i], -1)
        rows: dict[int, np.ndarray] = {}
        at_end = np.zeros(len(subsets), dtype=np.int64)
        for a, b in self.ov_terms(i):
            has_a = (subsets >> a) & 1
            if b == -1 or b == end_local:
                at_end += has_a
            else:
                row = rows.setdefault(b, np.zeros(len(subsets), dtype=np.int64))
                row += has_a & (subsets >> b)
        order = sorted(rows)
        inner = np.stack([rows[b] for b in order]) if order else np.zeros((0, len(subsets)), dtype=np.int64)
        has_end = (subsets >> end_local) & 1 if end_local >= 0 else np.zeros_like(subsets)
        return _GainParts(tuple(order), inner, at_end, has_end, end_local)

    def _candidates(self, parts: _GainParts, subsets, base, shared, reach_ok, start_bit, same_end) -> np.ndarray:
        leg = subsets & ~shared
        # every listed S is a chain, so its leg is one too
        feasible = ((leg & ~reach_ok) == 0) & (base >= 0)
        weights = np.array(
            [0 if shared >> b & 1 or b == start_bit else 1 for b in parts.bits], dtype=np.int64
        )
        gain = weights @ parts.inner if len(weights) else np.zeros_like(subsets)
        if not same_end:
            if parts.end_local >= 0 and shared >> parts.end_local & 1:
                gain = gain + parts.at_end * (1 - parts.has_end)
            else:
                gain = gain + parts.at_end
        return np.where(feasible, base + gain, UNREACHED)


def ov(
    inst: PcrpInstance,
    ordering: PairOrdering,
    i: int,
    j: int,
    s: Collection[int],
    s_prime: Collection[int],
) -> set[RequiredPair]:
    """Pairs nested in rank ``i`` (itself included) completed on the leg from ``j``.

    A pair counts when its first vertex is in ``S`` and its second vertex is
    new on the leg: in ``S`` but not in ``S'``, or the endpoint of ``i``
    itself, and never the vertex the leg starts from.
    """
    rec = _Recurrence(inst, ordering)
    end, start = rec.second[i], rec.second[j]
    new = (set(s) - set(s_prime)) | ({end} - set(s_prime))
    new.discard(start)
    return {
        RequiredPair(a, b) for a, b in rec.credit[i] if a in s and b in new
    }


def feasible_extension(
    inst: PcrpInstance, j: int, i: int, s: Collection[int], s_prime: Collection[int], ordering: PairOrdering | None = None
) -> bool:
    """Some path from the end of ``j`` to the end of ``i`` visits every vertex of ``S - S'``."""
    ordering = ordering or order_pairs(inst)
    reach = inst.reach
    start, end = ordering.second(j), ordering.second(i)
    leg = set(s) - set(s_prime)
    members = {start, end} | leg
    if not reach(start, end):
        return False
    return all(reach(start, v) and reach(v, end) for v in leg) and all(
        reach.comparable[v] >> w & 1 for v in members for w in members
    )


def build_table(inst: PcrpInstance, ordering: PairOrdering) -> tuple[DpTable, _Recurrence]:
    rec = _Recurrence(inst, ordering)
    values = [np.zeros(1, dtype=np.int64)]
    for i in range(1, rec.m + 1):
        values.append(rec.fill(i, values))
    table = DpTable(rec.op, rec.subsets, values)
    bound = sum(1 << len(op) for op in rec.op)
    assert table.state_count <= bound, "state count above the OP-subset bound"
    return table, rec


def max_rpsp_dp(inst: PcrpInstance) -> MaxRpspResult:
    """Solve MaxRPSP with the OP-subset dynamic program and rebuild a witness path."""
    inst = inst.coverable_only()
    ordering = order_pairs(inst)
    table, rec = build_table(inst, ordering)
    best_rank, best_s, best_val = 0, 0, 0
    for r, vals in enumerate(table.value):
        top = int(vals.max())
        if top > best_val:
            best_rank, best_s, best_val = r, int(rec.subsets[r][np.argmax(vals)]), top
    anchors: list[int] = []
    r, s = best_rank, best_s
    while r:
        target = _lookup(rec.subsets[r], table.value[r], s)
        for j in rec.predecessors(r):
            got, s_prime = rec.transition(j, r, s, table.value[j])
            if got == target:
                break
        else:  # pragma: no cover - would mean the two code paths disagree
            raise AssertionError(f"no transition reproduces state ({r}, {s})")
        shared = rec.leg_data(j, r)[0]
        leg = sorted(
            (rec.op[r][t] for t in bits(s & ~shared)),
            key=lambda v: inst.reach.anc[v].bit_count(),
        )
        anchors[:0] = [*leg, rec.second[r]]
        r, s = j, s_prime
    path = stitch_chain(inst.dag, anchors)
    covered = pairs_covered(inst, path)
    assert len(covered) >= best_val, "witness covers fewer pairs than claimed"
    return MaxRpspResult(
        count=best_val,
        path=path,
        covered=covered,
        p=max_overlap_degree(inst),
        state_count=table.state_count,
    )


def max_rpsp_bruteforce(inst: PcrpInstance, budget: int = 10**5) -> MaxRpspResult:
    """Best st-path by exhaustive enumeration; raises past ``budget`` paths."""
    best: tuple[int, StPath] | None = None
    for path in enumerate_st_paths(inst.dag, budget):
        count = len(pairs_covered(inst, path))
        if best is None or count > best[0]:
            best = (count, path)
    if best is None:  # pragma: no cover - validated DAGs always have a path
        raise PathBudgetExceeded("no st-path found")
    return MaxRpspResult(
        count=best[0],
        path=best[1],
        covered=pairs_covered(inst, best[1]),
        p=max_overlap_degree(inst.coverable_only()),
        state_count=0,
    )
