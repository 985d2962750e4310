"""User assignment, the full DP-similarity pipeline, and base-station pruning."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .dph import dph_cluster
from .errors import StructureError
from .metrics import class_sums
from .model import BsPartition, ClusterSystem, WeightMatrix, as_weights, validate_if_cluster


@dataclass(frozen=True)
class AssignmentResult:
    system: ClusterSystem
    empty_user_classes: tuple[int, ...]
    isolated_users: tuple[int, ...]


def class_user_sums(bs_partition: BsPartition, w: np.ndarray) -> np.ndarray:
    """``M x u`` matrix: summed weight from each base-station class to each user."""
    S = np.zeros((len(bs_partition), w.shape[1]))
    for k, c in enumerate(bs_partition):
        S[k] = w[list(c)].sum(axis=0)
    return S


def assign_users(bs_partition: BsPartition, W: WeightMatrix | Any) -> AssignmentResult:
    """Put every user in the class whose base-stations send it the most total signal.

    Ties go to the smallest class index. Users with no signal at all land in
    class 0 and are listed in ``isolated_users``.
    """
    W = as_weights(W)
    covered = bs_partition.members()
    if covered != set(range(W.b)):
        raise StructureError(f"partition does not cover base-stations 0..{W.b - 1}")
    S = class_user_sums(bs_partition, W.w)
    labels = np.argmax(S, axis=0)  # first maximum wins
    isolated = tuple(int(j) for j in np.flatnonzero(~np.any(W.w > 0, axis=0)))
    labels[list(isolated)] = 0
    M = len(bs_partition)
    users = tuple(tuple(int(j) for j in np.flatnonzero(labels == k)) for k in range(M))
    system = ClusterSystem(bs_partition, users)
    empty = tuple(k for k, c in enumerate(users) if not c)
    return AssignmentResult(system, empty, isolated)


def dp_similarity_clustering(W: WeightMatrix | Any, M: int) -> ClusterSystem:
    """Cluster base-stations by dot-product similarity, then assign users."""
    W = as_weights(W)
    return assign_users(dph_cluster(W, M).partition, W).system


@dataclass(frozen=True)
class PruneResult:
    system: ClusterSystem
    switched_off: tuple[int, ...]


def prune_bs(system: ClusterSystem, W: WeightMatrix | Any) -> PruneResult:
    """Switch off base-stations whose removal strictly lowers their class ratio.

    Classes are scanned in index order and base-stations within a class in
    index order; passes repeat until nothing changes. A removal is skipped if
    it would empty the base-station class or leave one of its users without a
    positive-weight base-station. A switched-off base-station's weights vanish
    from every class, so other classes' ratios cannot go up.
    """
    W = as_weights(W)
    report = validate_if_cluster(system, W)
    if not report.valid:
        raise StructureError(f"prune_bs needs an IF-valid system: {report.to_dict()}")
    w = W.w
    bs = [list(c) for c in system.bs_classes]
    users = [np.asarray(c, dtype=np.intp) for c in system.user_classes]
    off = set(system.switched_off)

    def current() -> ClusterSystem:
        return ClusterSystem(
            BsPartition(tuple(tuple(c) for c in bs)), system.user_classes, frozenset(off)
        )

    weight, cut = class_sums(system, W)
    changed = True
    while changed:
        changed = False
        for k in range(len(bs)):
            if not len(users[k]):
                continue
            for i in list(bs[k]):
                if len(bs[k]) == 1:
                    break
                rest = [x for x in bs[k] if x != i]
                if not np.all(np.any(w[np.ix_(rest, users[k])] > 0, axis=0)):
                    continue
                row = w[i]
                inside = row[users[k]].sum()
                new_weight = weight[k] - inside
                new_cut = cut[k] - (row.sum() - inside)
                if new_weight <= 0 or new_cut / new_weight >= cut[k] / weight[k]:
                    continue
                bs[k] = rest
                off.add(i)
                weight, cut = class_sums(current(), W)
                changed = True

    return PruneResult(current(), tuple(sorted(off - set(system.switched_off))))
