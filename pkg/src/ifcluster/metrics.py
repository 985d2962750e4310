"""Class weights, cut values and the total-interference objective."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import StructureError, UndefinedRatioError
from .model import ClusterSystem, WeightMatrix, as_weights


@dataclass(frozen=True)
class ClassTerm:
    weight: float
    cut: float
    ratio: float | None  # None when the class has no users and is skipped

    @property
    def skipped(self) -> bool:
        return self.ratio is None


@dataclass(frozen=True)
class TinfBreakdown:
    per_class: tuple[ClassTerm, ...]
    total: float

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "classes": [
                {"weight": t.weight, "cut": t.cut, "ratio": t.ratio, "skipped": t.skipped}
                for t in self.per_class
            ],
        }


def class_sums(system: ClusterSystem, W: WeightMatrix | Any) -> tuple[np.ndarray, np.ndarray]:
    """Intra-class weight and cut value of every class, in one pass over ``W``.

    Rows of switched-off base-stations are ignored.
    """
    W = as_weights(W)
    system.check_shape(W.b, W.u)
    M = system.M
    bl = system.bs_labels(W.b)
    ul = system.user_labels(W.u)
    active = bl >= 0
    w = W.w[active]
    rows = np.broadcast_to(bl[active][:, None], w.shape)
    cols = np.broadcast_to(ul[None, :], w.shape)
    same = rows == cols
    weight = np.bincount(rows[same], weights=w[same], minlength=M)
    cross = ~same
    cut = np.bincount(rows[cross], weights=w[cross], minlength=M) + np.bincount(
        cols[cross], weights=w[cross], minlength=M
    )
    return weight, cut


def _check_class(system: ClusterSystem, k: int) -> None:
    if not 0 <= k < system.M:
        raise StructureError(f"class index {k} out of range for M={system.M}")


def class_weight(system: ClusterSystem, W: WeightMatrix | Any, k: int) -> float:
    """Total weight of edges with both ends in class ``k``."""
    _check_class(system, k)
    return float(class_sums(system, W)[0][k])


def class_cut(system: ClusterSystem, W: WeightMatrix | Any, k: int) -> float:
    """Total weight of edges with exactly one end in class ``k``."""
    _check_class(system, k)
    return float(class_sums(system, W)[1][k])


def ratio_terms(
    weight: np.ndarray, cut: np.ndarray, has_users: np.ndarray
) -> tuple[ClassTerm, ...]:
    terms = []
    for k in range(len(weight)):
        if not has_users[k]:
            terms.append(ClassTerm(float(weight[k]), float(cut[k]), None))
            continue
        if weight[k] <= 0:
            raise UndefinedRatioError(k)
        terms.append(ClassTerm(float(weight[k]), float(cut[k]), float(cut[k] / weight[k])))
    return tuple(terms)


def tinf(system: ClusterSystem, W: WeightMatrix | Any) -> TinfBreakdown:
    """Sum over classes with users of cut value / intra-class weight.

    Also evaluates systems that are not IF-valid, as long as every class with
    users has positive intra-class weight; otherwise raises
    :class:`UndefinedRatioError`.
    """
    weight, cut = class_sums(system, W)
    has_users = np.array([bool(c) for c in system.user_classes])
    terms = ratio_terms(weight, cut, has_users)
    return TinfBreakdown(terms, math.fsum(t.ratio for t in terms if t.ratio is not None))


def tinf_value(system: ClusterSystem, W: WeightMatrix | Any) -> float:
    return tinf(system, W).total
