"""Bipartite base-station/user model: weight matrices, partitions, cluster systems.

Base-stations index the rows of the weight matrix and users index its columns.
All indices are 0-based. A cluster system pairs class ``k`` of the base-station
partition with class ``k`` of the user partition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import StructureError


class WeightMatrix:
    """Dense, read-only ``b x u`` matrix of nonnegative signal strengths.

    A positive entry ``w[i, j]`` is the edge between base-station ``i`` and
    user ``j``; a zero entry means there is no edge.
    """

    __slots__ = ("_w",)

    def __init__(self, weights: Any):
        w = np.array(weights, dtype=np.float64, copy=True)
        if w.ndim != 2:
            raise StructureError(f"weights must be 2-dimensional, got ndim={w.ndim}")
        if w.shape[0] < 1 or w.shape[1] < 1:
            raise StructureError(f"weights need b >= 1 and u >= 1, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise StructureError("weights contain non-finite entries")
        if np.any(w < 0):
            i, j = map(int, np.argwhere(w < 0)[0])
            raise StructureError(f"negative weight at ({i}, {j})")
        w.flags.writeable = False
        self._w = w

    @property
    def w(self) -> np.ndarray:
        return self._w

    @property
    def b(self) -> int:
        return self._w.shape[0]

    @property
    def u(self) -> int:
        return self._w.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._w.shape

    def scaled(self, c: float) -> "WeightMatrix":
        return WeightMatrix(self._w * c)

    def isolated_users(self) -> list[int]:
        """Users with no positive weight to any base-station."""
        return [int(j) for j in np.flatnonzero(~np.any(self._w > 0, axis=0))]

    def __array__(self, dtype=None, copy=None):
        return self._w if dtype is None else self._w.astype(dtype)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightMatrix):
            return NotImplemented
        return np.array_equal(self._w, other._w)

    def __repr__(self) -> str:
        return f"WeightMatrix(b={self.b}, u={self.u})"


def as_weights(W: WeightMatrix | Any) -> WeightMatrix:
    return W if isinstance(W, WeightMatrix) else WeightMatrix(W)


def _normalize_classes(classes: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    out = []
    for c in classes:
        items = sorted(int(x) for x in c)
        if any(x < 0 for x in items):
            raise StructureError(f"negative index in class {items}")
        out.append(tuple(items))
    seen: set[int] = set()
    for k, c in enumerate(out):
        if len(set(c)) != len(c):
            raise StructureError(f"class {k} contains duplicate indices")
        dup = seen.intersection(c)
        if dup:
            raise StructureError(f"index {min(dup)} appears in more than one class")
        seen.update(c)
    return tuple(out)


@dataclass(frozen=True)
class BsPartition:
    """Disjoint, nonempty classes of base-station indices."""

    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        classes = _normalize_classes(self.classes)
        for k, c in enumerate(classes):
            if not c:
                raise StructureError(f"base-station class {k} is empty")
        object.__setattr__(self, "classes", classes)

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __getitem__(self, k: int) -> tuple[int, ...]:
        return self.classes[k]

    def members(self) -> set[int]:
        return {i for c in self.classes for i in c}

    def labels(self, b: int) -> np.ndarray:
        """Class label per base-station; ``-1`` for indices not in any class."""
        lab = np.full(b, -1, dtype=np.intp)
        for k, c in enumerate(self.classes):
            lab[list(c)] = k
        return lab

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "BsPartition":
        """Build from a label vector; labels ``< 0`` mark unassigned indices."""
        labels = [int(x) for x in labels]
        m = max(labels, default=-1) + 1
        classes: list[list[int]] = [[] for _ in range(m)]
        for i, k in enumerate(labels):
            if k >= 0:
                classes[k].append(i)
        return cls(tuple(tuple(c) for c in classes))


@dataclass(frozen=True)
class ClusterSystem:
    """Paired partitions: class ``k`` is ``(bs_classes[k], user_classes[k])``.

    User classes may be empty. ``switched_off`` holds base-stations that were
    taken out of service; they belong to no class and carry no weight.
    """

    bs_classes: BsPartition
    user_classes: tuple[tuple[int, ...], ...]
    switched_off: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        bs = self.bs_classes
        if not isinstance(bs, BsPartition):
            bs = BsPartition(tuple(tuple(c) for c in bs))
            object.__setattr__(self, "bs_classes", bs)
        users = _normalize_classes(self.user_classes)
        if len(users) != len(bs):
            raise StructureError(
                f"{len(bs)} base-station classes but {len(users)} user classes"
            )
        off = frozenset(int(i) for i in self.switched_off)
        clash = off & bs.members()
        if clash:
            raise StructureError(f"switched-off base-station {min(clash)} is also in a class")
        object.__setattr__(self, "user_classes", users)
        object.__setattr__(self, "switched_off", off)

    @property
    def M(self) -> int:
        return len(self.bs_classes)

    def check_shape(self, b: int, u: int) -> None:
        """Raise :class:`StructureError` unless the system covers exactly ``b`` BSs and ``u`` users."""
        bs_all = self.bs_classes.members() | self.switched_off
        if bs_all != set(range(b)):
            extra = sorted(bs_all - set(range(b)))
            missing = sorted(set(range(b)) - bs_all)
            raise StructureError(
                f"base-station classes do not cover 0..{b - 1}"
                f" (missing {missing[:5]}, out of range {extra[:5]})"
            )
        users_all = {j for c in self.user_classes for j in c}
        if users_all != set(range(u)):
            extra = sorted(users_all - set(range(u)))
            missing = sorted(set(range(u)) - users_all)
            raise StructureError(
                f"user classes do not cover 0..{u - 1}"
                f" (missing {missing[:5]}, out of range {extra[:5]})"
            )

    @cached_property
    def _b(self) -> int:
        return max(self.bs_classes.members() | self.switched_off) + 1

    @cached_property
    def _u(self) -> int:
        return max((j for c in self.user_classes for j in c), default=-1) + 1

    def bs_labels(self, b: int | None = None) -> np.ndarray:
        return self.bs_classes.labels(self._b if b is None else b)

    def user_labels(self, u: int | None = None) -> np.ndarray:
        lab = np.full(self._u if u is None else u, -1, dtype=np.intp)
        for k, c in enumerate(self.user_classes):
            lab[list(c)] = k
        return lab

    def sizes(self) -> tuple[list[int], list[int]]:
        return [len(c) for c in self.bs_classes], [len(c) for c in self.user_classes]

    @classmethod
    def from_labels(
        cls,
        bs_labels: Sequence[int],
        user_labels: Sequence[int],
        M: int | None = None,
    ) -> "ClusterSystem":
        """Inverse of :meth:`bs_labels`/:meth:`user_labels`; negative BS labels are switched off."""
        bs_labels = [int(x) for x in bs_labels]
        user_labels = [int(x) for x in user_labels]
        if M is None:
            M = max(bs_labels) + 1
        if any(k >= M for k in bs_labels) or any(not 0 <= k < M for k in user_labels):
            raise StructureError(f"labels out of range for M={M}")
        bs = [[] for _ in range(M)]
        users = [[] for _ in range(M)]
        off = []
        for i, k in enumerate(bs_labels):
            (bs[k] if k >= 0 else off).append(i)
        for j, k in enumerate(user_labels):
            users[k].append(j)
        return cls(BsPartition(tuple(map(tuple, bs))), tuple(map(tuple, users)), frozenset(off))

    def to_dict(self) -> dict:
        d = {
            "bs_classes": [list(c) for c in self.bs_classes],
            "user_classes": [list(c) for c in self.user_classes],
        }
        if self.switched_off:
            d["switched_off"] = sorted(self.switched_off)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ClusterSystem":
        try:
            bs = d["bs_classes"]
            users = d["user_classes"]
        except KeyError as e:
            raise StructureError(f"cluster system is missing field {e.args[0]!r}") from None
        return cls(
            BsPartition(tuple(tuple(c) for c in bs)),
            tuple(tuple(c) for c in users),
            frozenset(d.get("switched_off", ())),
        )


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    empty_bs_classes: tuple[int, ...] = ()
    unserved: tuple[tuple[int, int], ...] = ()  # (class, user) pairs breaking condition (ii)

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "empty_bs_classes": list(self.empty_bs_classes),
            "unserved": [list(p) for p in self.unserved],
        }


def validate_if_cluster(system: ClusterSystem, W: WeightMatrix | Any) -> ValidationReport:
    """Check the two IF-cluster conditions.

    (i) no class without base-stations, (ii) every user has a positive-weight
    edge to some base-station of its own class.
    """
    W = as_weights(W)
    system.check_shape(W.b, W.u)
    empty = tuple(k for k, c in enumerate(system.bs_classes) if not c)
    positive = W.w > 0
    unserved = []
    for k, (bs, users) in enumerate(zip(system.bs_classes, system.user_classes)):
        if not users:
            continue
        users_arr = np.asarray(users, dtype=np.intp)
        served = positive[np.ix_(bs, users_arr)].any(axis=0)
        unserved.extend((k, int(j)) for j in users_arr[~served])
    return ValidationReport(not empty and not unserved, empty, tuple(unserved))
