"""Dot-product (cosine) similarity between base-stations and merged ensembles.

An ensemble of base-stations is represented by the sum of their rows of ``W``.
``GramTable`` keeps all pairwise dot products of these summed rows so that a
similarity costs three scalar operations and a merge costs ``O(b)`` additions.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .errors import StructureError
from .model import WeightMatrix, as_weights


class GramTable:
    """Pairwise dot products of ensemble signal vectors, indexed by slot.

    Slot ``k`` starts as base-station ``k``. Merging slots keeps the smaller
    index alive and tombstones the other; slots are never compacted.
    """

    def __init__(self, dot: np.ndarray):
        self.dot = np.array(dot, dtype=np.float64)
        self.alive = np.ones(self.dot.shape[0], dtype=bool)

    @classmethod
    def from_weights(cls, W: WeightMatrix | Any) -> "GramTable":
        w = as_weights(W).w
        return cls(w @ w.T)

    def __len__(self) -> int:
        return self.dot.shape[0]

    def alive_slots(self) -> np.ndarray:
        return np.flatnonzero(self.alive)

    def _check_alive(self, *slots: int) -> None:
        for s in slots:
            if not 0 <= s < len(self) or not self.alive[s]:
                raise StructureError(f"slot {s} is not alive")

    def rho(self, k: int, m: int) -> float:
        """Cosine similarity of the signal vectors in slots ``k`` and ``m``.

        Zero when either vector is zero.
        """
        if k == m:
            raise StructureError("rho needs two distinct slots")
        self._check_alive(k, m)
        return float(rho_row(self.dot, k, np.array([m]))[0])

    def merge(self, k: int, m: int) -> int:
        """Merge slots ``k`` and ``m`` in place and return the surviving slot."""
        if k == m:
            raise StructureError("cannot merge a slot with itself")
        self._check_alive(k, m)
        s, dead = min(k, m), max(k, m)
        d = self.dot
        self_dot = d[k, k] + 2.0 * d[k, m] + d[m, m]
        row = d[k] + d[m]
        d[s, :] = row
        d[:, s] = row
        d[s, s] = self_dot
        self.alive[dead] = False
        return s


def rho_row(dot: np.ndarray, k: int, others: np.ndarray) -> np.ndarray:
    """Similarities between slot ``k`` and each slot in ``others``."""
    num = dot[k, others]
    denom = np.sqrt(dot[k, k] * dot[others, others])
    out = np.zeros(len(others))
    ok = denom > 0
    np.divide(num, denom, out=out, where=ok)
    # Cauchy-Schwarz can be overshot by one ulp
    return np.minimum(out, 1.0, out=out)


def gram_init(W: WeightMatrix | Any) -> GramTable:
    return GramTable.from_weights(W)


def rho(table: GramTable, k: int, m: int) -> float:
    return table.rho(k, m)


def gram_merge(table: GramTable, k: int, m: int) -> int:
    return table.merge(k, m)
