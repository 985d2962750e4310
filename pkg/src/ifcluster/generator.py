"""Synthetic instances: uniform placement in a square, truncated path-loss weights.

Random stream (numpy ``PCG64`` seeded with the 64-bit ``seed``): ``2*b``
uniforms for the base-stations, then ``2*u`` for the users, each point drawn
as ``x`` then ``y``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ParameterError
from .model import WeightMatrix


@dataclass(frozen=True)
class GeneratorConfig:
    b: int
    u: int
    side: float = 1000.0
    dist_min: float = 1.0
    dist_max: float = 200.0
    alpha: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.b < 1 or self.u < 1:
            raise ParameterError(f"need b >= 1 and u >= 1, got b={self.b}, u={self.u}")
        if not 0 < self.dist_min <= self.dist_max <= self.side * math.sqrt(2):
            raise ParameterError(
                "need 0 < dist_min <= dist_max <= side*sqrt(2),"
                f" got {self.dist_min}, {self.dist_max}, side={self.side}"
            )
        if self.alpha <= 0:
            raise ParameterError(f"alpha must be positive, got {self.alpha}")
        if not 0 <= self.seed < 2**64:
            raise ParameterError(f"seed must fit in 64 unsigned bits, got {self.seed}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Instance:
    weights: WeightMatrix
    bs: np.ndarray | None = None
    users: np.ndarray | None = None
    config: GeneratorConfig | None = None

    @property
    def b(self) -> int:
        return self.weights.b

    @property
    def u(self) -> int:
        return self.weights.u


def path_loss(dist: np.ndarray, dist_min: float, dist_max: float, alpha: float) -> np.ndarray:
    """Signal strength ``max(d, dist_min)**-alpha`` for ``d <= dist_max``, else 0."""
    dist = np.asarray(dist, dtype=np.float64)
    w = np.maximum(dist, dist_min) ** -alpha
    return np.where(dist <= dist_max, w, 0.0)


def generate(config: GeneratorConfig) -> Instance:
    rng = np.random.Generator(np.random.PCG64(config.seed))
    bs = rng.uniform(0.0, config.side, size=(config.b, 2))
    users = rng.uniform(0.0, config.side, size=(config.u, 2))
    dist = np.hypot(bs[:, None, 0] - users[None, :, 0], bs[:, None, 1] - users[None, :, 1])
    w = path_loss(dist, config.dist_min, config.dist_max, config.alpha)
    return Instance(WeightMatrix(w), bs, users, config)
