"""Exhaustive search for the minimum-interference IF-cluster system on tiny instances.

Base-station partitions into exactly ``M`` nonempty classes are enumerated as
restricted growth strings in lexicographic order; for each, every assignment
of users to the ``M`` classes (empty user classes included) is scored in
vectorized batches. Ties keep the first system in that order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterator

import numpy as np

from .errors import InstanceTooLargeError, ParameterError
from .model import ClusterSystem, WeightMatrix, as_weights

DEFAULT_LIMIT = 10**8
_BATCH = 1 << 15


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Number of ways to split ``n`` labelled items into ``k`` nonempty blocks."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def search_space(b: int, u: int, M: int) -> int:
    return stirling2(b, M) * M**u


def set_partitions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length ``n`` using exactly labels ``0..k-1``.

    Yields in lexicographic order; label ``i`` first appears before label ``i+1``.
    """
    if not 1 <= k <= n:
        return
    a = [0] * n

    def rec(pos: int, used: int) -> Iterator[tuple[int, ...]]:
        if n - pos < k - used:
            return
        if pos == n:
            yield tuple(a)
            return
        for lab in range(min(used + 1, k)):
            a[pos] = lab
            yield from rec(pos + 1, max(used, lab + 1))

    a[0] = 0
    yield from rec(1, 1)


def user_assignments(u: int, M: int) -> Iterator[np.ndarray]:
    """All ``M**u`` label vectors in lexicographic order, in ``(batch, u)`` blocks."""
    it = itertools.product(range(M), repeat=u)
    while True:
        block = list(itertools.islice(it, _BATCH))
        if not block:
            return
        yield np.array(block, dtype=np.intp).reshape(len(block), u)


def score_assignments(w: np.ndarray, bs_labels: np.ndarray, M: int, users: np.ndarray):
    """Score many user assignments for one base-station partition.

    Returns ``(tinf, valid)`` arrays over the rows of ``users``; ``tinf`` is
    ``inf`` where a class with users has zero intra-class weight. Works from
    the ``M x u`` class-to-user sum matrix, independently of :mod:`.metrics`.
    """
    S = np.zeros((M, w.shape[1]))
    np.add.at(S, bs_labels, w)
    served = S > 0  # weights are nonnegative
    # weight reaching each user from the other classes, summed without cancellation
    others = np.stack([np.delete(S, k, axis=0).sum(axis=0) for k in range(M)])
    n, u = users.shape
    onehot = np.zeros((n, M, u))
    onehot[np.arange(n)[:, None], users, np.arange(u)[None, :]] = 1.0
    inside = np.einsum("nku,ku->nk", onehot, S)
    cut = np.einsum("nku,ku->nk", 1.0 - onehot, S) + np.einsum("nku,ku->nk", onehot, others)
    has_users = onehot.any(axis=2)
    valid = served[users, np.arange(u)[None, :]].all(axis=1)
    ratio = np.zeros_like(inside)
    np.divide(cut, inside, out=ratio, where=has_users & (inside > 0))
    ratio[has_users & (inside <= 0)] = np.inf
    return ratio.sum(axis=1), valid


@dataclass(frozen=True)
class OracleResult:
    best_system: ClusterSystem | None
    best_tinf: float
    systems_enumerated: int

    def to_dict(self) -> dict:
        return {
            "best_system": None if self.best_system is None else self.best_system.to_dict(),
            "best_tinf": None if self.best_system is None else self.best_tinf,
            "systems_enumerated": self.systems_enumerated,
        }


def brute_force_optimal(W: WeightMatrix | Any, M: int, limit: int = DEFAULT_LIMIT) -> OracleResult:
    """Minimum-tinf IF-cluster system with exactly ``M`` base-station classes.

    When no IF-valid system exists (some user has no positive weight at all)
    the result has ``best_system=None`` and ``best_tinf=inf``.
    """
    W = as_weights(W)
    b, u = W.shape
    if not 1 <= M <= b:
        raise ParameterError(f"M must be in 1..{b}, got {M}")
    count = search_space(b, u, M)
    if count > limit:
        raise InstanceTooLargeError(count, limit)
    w = W.w
    best = (np.inf, None, None)
    enumerated = 0
    for bs_labels in set_partitions(b, M):
        bl = np.asarray(bs_labels, dtype=np.intp)
        for users in user_assignments(u, M):
            tinf, valid = score_assignments(w, bl, M, users)
            enumerated += len(users)
            if not valid.any():
                continue
            tinf = np.where(valid, tinf, np.inf)
            k = int(np.argmin(tinf))
            if tinf[k] < best[0]:
                best = (float(tinf[k]), bl, users[k].copy())
    if best[1] is None:
        return OracleResult(None, float("inf"), enumerated)
    system = ClusterSystem.from_labels(best[1], best[2], M)
    return OracleResult(system, best[0], enumerated)


def iter_systems(b: int, u: int, M: int) -> Iterator[ClusterSystem]:
    """Every cluster system with exactly ``M`` nonempty base-station classes."""
    for bs_labels in set_partitions(b, M):
        for users in itertools.product(range(M), repeat=u):
            yield ClusterSystem.from_labels(bs_labels, users, M)
