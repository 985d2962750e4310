import math

import numpy as np
import pytest

from ifcluster.errors import ParameterError
from ifcluster.generator import GeneratorConfig, generate, path_loss


@pytest.mark.parametrize("dist, expected", [(100.0, 1e-4), (250.0, 0.0), (0.5, 1.0), (1.0, 1.0), (200.0, 2.5e-5)])
def test_path_loss(dist, expected):
    assert path_loss(dist, 1.0, 200.0, 2.0) == pytest.approx(expected, rel=1e-15)


def test_bs_user_geometry():
    bs = np.array([0.0, 0.0])
    user = np.array([0.0, 100.0])
    assert path_loss(np.linalg.norm(bs - user), 1.0, 200.0, 2.0) == pytest.approx(1e-4)


def test_weights_follow_coordinates():
    inst = generate(GeneratorConfig(5, 7, seed=3))
    d = np.linalg.norm(inst.bs[:, None, :] - inst.users[None, :, :], axis=2)
    np.testing.assert_allclose(inst.weights.w, path_loss(d, 1.0, 200.0, 2.0), rtol=1e-15)


def test_deterministic():
    a = generate(GeneratorConfig(20, 30, seed=2**63 + 11))
    b = generate(GeneratorConfig(20, 30, seed=2**63 + 11))
    assert a.weights == b.weights
    np.testing.assert_array_equal(a.bs, b.bs)
    assert a.weights != generate(GeneratorConfig(20, 30, seed=12)).weights


def test_stream_order():
    # BS points come first, x before y
    cfg = GeneratorConfig(3, 2, seed=99)
    raw = np.random.Generator(np.random.PCG64(99)).uniform(0, 1000, size=10)
    inst = generate(cfg)
    np.testing.assert_array_equal(inst.bs.ravel(), raw[:6])
    np.testing.assert_array_equal(inst.users.ravel(), raw[6:])


def test_weight_range():
    w = generate(GeneratorConfig(50, 200, seed=1)).weights.w
    assert w.min() >= 0 and w.max() <= 1.0


def test_edge_density():
    # exact P(|X-Y| <= r) for uniform points in the unit square, r = 200/1000
    r = 0.2
    expected = math.pi * r**2 - 8 * r**3 / 3 + r**4 / 2
    dens = [(generate(GeneratorConfig(50, 200, seed=s)).weights.w > 0).mean() for s in range(100)]
    assert np.mean(dens) == pytest.approx(expected, abs=0.01)


@pytest.mark.parametrize("kw", [
    dict(b=0, u=1), dict(b=1, u=0), dict(b=1, u=1, dist_min=0),
    dict(b=1, u=1, dist_min=300, dist_max=200), dict(b=1, u=1, dist_max=5000),
    dict(b=1, u=1, alpha=0), dict(b=1, u=1, seed=-1), dict(b=1, u=1, seed=2**64),
])
def test_config_validation(kw):
    with pytest.raises(ParameterError):
        GeneratorConfig(**kw)
