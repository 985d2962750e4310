"""Agglomerative clustering of base-stations by dot-product similarity.

Starting from singletons, the two alive clusters with the largest cosine
similarity are merged until ``M`` clusters remain. Equal similarities are
resolved in favour of the lexicographically smallest ``(slot_a, slot_b)``.

``dph_cluster`` keeps candidate pairs in a binary heap with lazy deletion:
each slot carries a version counter that is bumped on every merge, and popped
entries whose recorded versions are out of date are dropped.
``dph_cluster_naive`` rescans every alive pair each round and exists as a
reference for testing.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Any, NamedTuple

import numpy as np

from .errors import ParameterError
from .model import BsPartition, WeightMatrix, as_weights
from .similarity import GramTable, rho_row


class MergeRecord(NamedTuple):
    round: int
    slot_a: int
    slot_b: int
    rho: float


@dataclass(frozen=True)
class MergeTrace:
    merges: tuple[MergeRecord, ...]
    partition: BsPartition

    def to_dict(self) -> dict:
        return {
            "merges": [
                {"round": r.round, "pair": [r.slot_a, r.slot_b], "rho": r.rho}
                for r in self.merges
            ],
            "bs_classes": [list(c) for c in self.partition],
        }


def _check_m(b: int, M: int) -> None:
    if M < 1:
        raise ParameterError(f"M must be at least 1, got {M}")
    if M > b:
        raise ParameterError(f"M={M} exceeds the number of base-stations b={b}")


def _finish(b: int, parent_of: list[int], merges: list[MergeRecord]) -> MergeTrace:
    # parent_of[i] is the slot that absorbed i, or i itself while alive
    def root(i: int) -> int:
        while parent_of[i] != i:
            i = parent_of[i]
        return i

    groups: dict[int, list[int]] = {}
    for i in range(b):
        groups.setdefault(root(i), []).append(i)
    classes = tuple(tuple(groups[s]) for s in sorted(groups))
    return MergeTrace(tuple(merges), BsPartition(classes))


def dph_cluster(W: WeightMatrix | Any, M: int, check: bool = False) -> MergeTrace:
    """Merge base-stations into ``M`` clusters, heap-driven.

    With ``check=True`` every heap choice is compared against a full scan of
    the alive pairs and an ``AssertionError`` is raised on disagreement.
    """
    W = as_weights(W)
    b = W.b
    _check_m(b, M)
    table = GramTable.from_weights(W)
    version = np.zeros(b, dtype=np.int64)
    parent_of = list(range(b))

    ka, kb = np.triu_indices(b, k=1)
    dot = table.dot
    diag = np.diag(dot)
    denom = np.sqrt(diag[ka] * diag[kb])
    r0 = np.zeros(len(ka))
    np.divide(dot[ka, kb], denom, out=r0, where=denom > 0)
    np.minimum(r0, 1.0, out=r0)
    zeros = [0] * len(ka)
    heap = list(zip((-r0).tolist(), ka.tolist(), kb.tolist(), zeros, zeros))
    heapq.heapify(heap)
    push, pop = heapq.heappush, heapq.heappop

    merges: list[MergeRecord] = []
    for rnd in range(b - M):
        while True:
            neg_r, a, c, va, vc = pop(heap)
            if table.alive[a] and table.alive[c] and version[a] == va and version[c] == vc:
                break
        if check:
            expect = _scan_best(table)
            assert expect == (-neg_r, a, c), f"heap chose {(-neg_r, a, c)}, scan gives {expect}"
        s = table.merge(a, c)
        parent_of[c] = s
        version[s] += 1
        version[c] += 1
        merges.append(MergeRecord(rnd, a, c, -neg_r))

        others = table.alive_slots()
        others = others[others != s]
        r = rho_row(table.dot, s, others)
        lo = np.minimum(others, s)
        hi = np.maximum(others, s)
        for entry in zip((-r).tolist(), lo.tolist(), hi.tolist(),
                         version[lo].tolist(), version[hi].tolist()):
            push(heap, entry)
    return _finish(b, parent_of, merges)


def _scan_best(table: GramTable) -> tuple[float, int, int]:
    alive = table.alive_slots().tolist()
    best = None
    for idx, k in enumerate(alive[:-1]):
        others = np.array(alive[idx + 1:], dtype=np.intp)
        for m, r in zip(others.tolist(), rho_row(table.dot, k, others).tolist()):
            # strict > keeps the earliest (lexicographically smallest) pair on ties
            if best is None or r > best[0]:
                best = (r, k, m)
    return best


def dph_cluster_naive(W: WeightMatrix | Any, M: int) -> MergeTrace:
    """Same contract as :func:`dph_cluster`, by full rescan of alive pairs each round."""
    W = as_weights(W)
    b = W.b
    _check_m(b, M)
    table = GramTable.from_weights(W)
    parent_of = list(range(b))
    merges: list[MergeRecord] = []
    for rnd in range(b - M):
        r, a, c = _scan_best(table)
        table.merge(a, c)
        parent_of[c] = a
        merges.append(MergeRecord(rnd, a, c, r))
    return _finish(b, parent_of, merges)
