"""Incremental maintenance of a clustering under user churn and weight changes.

The base-station partition stays frozen between global re-clusterings. Users
that join or whose weights change pick their best class themselves, and the
per-class intra weight and cut value are patched with the user's own
contribution, so tinf is available after each event without a full rescan.
A full re-clustering runs when tinf exceeds ``(1 + threshold)`` times the
value recorded at the previous global clustering.

Leaving users are deleted, so every user index above the leaver shifts down
by one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Union

import numpy as np

from .assign import assign_users, class_user_sums
from .dph import dph_cluster
from .errors import ParameterError, StructureError
from .model import BsPartition, ClusterSystem, WeightMatrix, as_weights

DEFAULT_THRESHOLD = 0.2

LOCAL = "local-reassign"
NONE = "none"
GLOBAL = "global-recluster"


@dataclass(frozen=True)
class Join:
    weights: tuple[float, ...]


@dataclass(frozen=True)
class Leave:
    j: int


@dataclass(frozen=True)
class Update:
    i: int
    j: int
    w: float


Event = Union[Join, Leave, Update]


def event_from_dict(d: dict) -> Event:
    """Parse one event of the JSON-lines stream."""
    op = d.get("op")
    try:
        if op == "join":
            return Join(tuple(float(x) for x in d["weights"]))
        if op == "leave":
            return Leave(int(d["j"]))
        if op == "update":
            return Update(int(d["i"]), int(d["j"]), float(d["w"]))
    except KeyError as e:
        raise StructureError(f"{op!r} event is missing field {e.args[0]!r}") from None
    raise StructureError(f"unknown event op {op!r}")


def event_to_dict(ev: Event) -> dict:
    if isinstance(ev, Join):
        return {"op": "join", "weights": list(ev.weights)}
    if isinstance(ev, Leave):
        return {"op": "leave", "j": ev.j}
    return {"op": "update", "i": ev.i, "j": ev.j, "w": ev.w}


@dataclass(frozen=True)
class EventResult:
    action: str
    tinf: float
    baseline: float
    tinf_before: float  # tinf once the event was applied locally, before any re-clustering
    moved: tuple[int, ...] = ()
    warnings: tuple[str, ...] = field(default=())


class DynamicClusterer:
    """Single-writer clustering state driven by :meth:`apply`."""

    def __init__(self, W: WeightMatrix | Any, M: int, threshold: float = DEFAULT_THRESHOLD):
        W = as_weights(W)
        if threshold < 0:
            raise ParameterError(f"threshold must be nonnegative, got {threshold}")
        if not 1 <= M <= W.b:
            raise ParameterError(f"M must be in 1..{W.b}, got {M}")
        self.M = M
        self.threshold = threshold
        self.w = np.array(W.w)
        self.recluster()

    # -- queries -------------------------------------------------------

    @property
    def b(self) -> int:
        return self.w.shape[0]

    @property
    def u(self) -> int:
        return self.w.shape[1]

    def tinf(self) -> float:
        total = []
        for k in range(self.M):
            if self.count[k] == 0:
                continue
            if self.inside[k] <= 0:
                return math.inf
            total.append(self.cut[k] / self.inside[k])
        return math.fsum(total)

    def system(self) -> ClusterSystem:
        users = tuple(tuple(np.flatnonzero(self.labels == k).tolist()) for k in range(self.M))
        return ClusterSystem(self.bs_partition, users)

    def weights(self) -> WeightMatrix:
        return WeightMatrix(self.w)

    # -- bookkeeping ---------------------------------------------------

    def _contribute(self, j: int, label: int, sign: float) -> None:
        col = self.S[:, j]
        total = col.sum()
        self.inside[label] += sign * col[label]
        self.cut[label] += sign * (total - col[label])
        mask = np.ones(self.M, dtype=bool)
        mask[label] = False
        self.cut[mask] += sign * col[mask]
        self.count[label] += 1 if sign > 0 else -1

    def _best(self, j: int) -> int:
        col = self.S[:, j]
        return int(np.argmax(col)) if np.any(col > 0) else 0

    def _settle(self, users) -> list[int]:
        moved = []
        for j in users:
            j = int(j)
            best = self._best(j)
            if best != self.labels[j]:
                self._contribute(j, int(self.labels[j]), -1.0)
                self.labels[j] = best
                self._contribute(j, best, +1.0)
                moved.append(j)
        return moved

    def recluster(self) -> None:
        """Run the full clustering on the current weights and reset the baseline."""
        W = WeightMatrix(self.w)
        self.bs_partition: BsPartition = dph_cluster(W, self.M).partition
        self._rebuild(assign_users(self.bs_partition, W).system)

    def _rebuild(self, system: ClusterSystem) -> None:
        self.bs_label = system.bs_labels(self.b)
        self.S = class_user_sums(self.bs_partition, self.w)
        self.labels = system.user_labels(self.u)
        self.inside = np.zeros(self.M)
        self.cut = np.zeros(self.M)
        self.count = np.zeros(self.M, dtype=np.int64)
        for j in range(self.u):
            self._contribute(j, int(self.labels[j]), +1.0)
        self.baseline = self.tinf()

    def replace_weights(self, W: WeightMatrix | Any) -> None:
        """Swap in a new weight matrix (e.g. after base-station changes) and re-cluster."""
        W = as_weights(W)
        if self.M > W.b:
            raise ParameterError(f"M={self.M} exceeds the new base-station count {W.b}")
        self.w = np.array(W.w)
        self.recluster()

    # -- events --------------------------------------------------------

    def apply(self, event: Event) -> EventResult:
        warnings: list[str] = []
        moved: list[int] = []
        action = NONE
        if isinstance(event, Join):
            col = np.asarray(event.weights, dtype=np.float64)
            if col.shape != (self.b,):
                raise StructureError(f"joining user needs {self.b} weights, got {col.shape}")
            if np.any(col < 0) or not np.all(np.isfinite(col)):
                raise StructureError("joining user has negative or non-finite weights")
            j = self.u
            self.w = np.column_stack([self.w, col])
            self.S = np.column_stack([self.S, class_user_sums(self.bs_partition, col[:, None])])
            label = self._best(j)
            if not np.any(col > 0):
                warnings.append(f"user {j} joined with no signal; placed in class 0")
            self.labels = np.append(self.labels, label)
            self._contribute(j, label, +1.0)
            moved.append(j)
            action = LOCAL
        elif isinstance(event, Leave):
            j = event.j
            if not 0 <= j < self.u:
                raise StructureError(f"user {j} does not exist (u={self.u})")
            if self.u == 1:
                raise StructureError("cannot remove the last user")
            self._contribute(j, int(self.labels[j]), -1.0)
            self.w = np.delete(self.w, j, axis=1)
            self.S = np.delete(self.S, j, axis=1)
            self.labels = np.delete(self.labels, j)
        elif isinstance(event, Update):
            i, j, value = event.i, event.j, float(event.w)
            if not (0 <= i < self.b and 0 <= j < self.u):
                raise StructureError(f"entry ({i}, {j}) out of range for {self.b}x{self.u}")
            if value < 0 or not math.isfinite(value):
                raise StructureError(f"weight must be finite and nonnegative, got {value}")
            old_label = int(self.labels[j])
            self._contribute(j, old_label, -1.0)
            k = int(self.bs_label[i])
            self.w[i, j] = value
            self.S[k, j] = self.w[list(self.bs_partition[k]), j].sum()
            self._contribute(j, old_label, +1.0)
            # only the classes of BS i and user j changed their sums
            affected = np.flatnonzero(np.isin(self.labels, [k, old_label]))
            moved = self._settle(affected)
            if moved:
                action = LOCAL
            if not np.any(self.w[:, j] > 0):
                warnings.append(f"user {j} lost all signal")
        else:
            raise StructureError(f"unknown event {event!r}")

        before = self.tinf()
        if before > (1.0 + self.threshold) * self.baseline:
            self.recluster()
            action = GLOBAL
        return EventResult(action, self.tinf(), self.baseline, before, tuple(moved), tuple(warnings))


def apply_event(state: DynamicClusterer, event: Event) -> EventResult:
    return state.apply(event)
