import math

import numpy as np
import pytest

from conftest import naive_tinf, random_weights
from ifcluster.assign import dp_similarity_clustering
from ifcluster.errors import InstanceTooLargeError, ParameterError
from ifcluster.metrics import tinf_value
from ifcluster.model import validate_if_cluster
from ifcluster.oracle import (
    brute_force_optimal,
    iter_systems,
    search_space,
    set_partitions,
    stirling2,
)


@pytest.mark.parametrize("n, k, expected", [(4, 2, 7), (5, 3, 25), (6, 1, 1), (6, 6, 1), (3, 4, 0), (10, 4, 34105)])
def test_stirling(n, k, expected):
    assert stirling2(n, k) == expected


@pytest.mark.parametrize("n, k", [(1, 1), (4, 2), (5, 3), (6, 4), (7, 7)])
def test_set_partitions_enumeration(n, k):
    parts = list(set_partitions(n, k))
    assert len(parts) == stirling2(n, k)
    assert parts == sorted(parts)
    canon = set()
    for p in parts:
        assert set(p) == set(range(k))
        # restricted growth: labels appear in increasing order of first use
        first = [p.index(lab) for lab in range(k)]
        assert first == sorted(first)
        canon.add(frozenset(frozenset(i for i in range(n) if p[i] == lab) for lab in range(k)))
    assert len(canon) == len(parts)


def test_two_by_two_optimum():
    r = brute_force_optimal([[2, 1], [0, 3]], 2)
    assert r.systems_enumerated == 4
    assert r.best_tinf == pytest.approx(5 / 6)
    assert r.best_system.bs_classes.classes == ((0,), (1,))
    assert r.best_system.user_classes == ((0,), (1,))


def test_m_one_is_zero(rng):
    w = random_weights(rng, 3, 4)
    assert brute_force_optimal(w, 1).best_tinf == 0


def test_no_valid_system():
    r = brute_force_optimal([[1, 0], [1, 0]], 2)
    assert r.best_system is None and math.isinf(r.best_tinf)
    assert r.to_dict()["best_tinf"] is None


def test_refuses_large_instances():
    with pytest.raises(InstanceTooLargeError) as e:
        brute_force_optimal(np.ones((12, 12)), 5)
    assert e.value.count == search_space(12, 12, 5)
    with pytest.raises(ParameterError):
        brute_force_optimal(np.ones((2, 2)), 3)


def test_matches_exhaustive_naive(rng):
    for _ in range(15):
        b, u = int(rng.integers(1, 4)), int(rng.integers(1, 5))
        w = random_weights(rng, b, u, density=0.6)
        for M in range(1, b + 1):
            best = math.inf
            for s in iter_systems(b, u, M):
                if validate_if_cluster(s, w).valid:
                    best = min(best, naive_tinf(s.bs_classes, s.user_classes, w.tolist()))
            r = brute_force_optimal(w, M)
            assert r.systems_enumerated == search_space(b, u, M)
            assert r.best_tinf == pytest.approx(best, rel=1e-12, abs=1e-15)
            assert tinf_value(r.best_system, w) == pytest.approx(r.best_tinf, rel=1e-12, abs=1e-15)


def test_dp_never_beats_oracle(rng):
    for _ in range(20):
        w = random_weights(rng, 4, 5, density=0.5)
        for M in (1, 2, 3):
            dp = tinf_value(dp_similarity_clustering(w, M), w)
            assert dp >= brute_force_optimal(w, M).best_tinf - 1e-12


def test_optimum_monotone_in_m(rng):
    for _ in range(30):
        b, u = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        w = random_weights(rng, b, u, density=0.5)
        vals = [brute_force_optimal(w, M).best_tinf for M in range(1, b + 1)]
        assert all(x <= y + 1e-12 for x, y in zip(vals, vals[1:]))


def test_stronger_inside_edge_never_hurts(rng):
    for _ in range(30):
        w = random_weights(rng, 3, 4, density=0.6)
        r = brute_force_optimal(w, 2)
        s = r.best_system
        inside = [(i, j) for I, J in zip(s.bs_classes, s.user_classes) for i in I for j in J]
        i, j = inside[rng.integers(len(inside))]
        w2 = w.copy()
        w2[i, j] += rng.uniform(0.1, 2.0)
        assert brute_force_optimal(w2, 2).best_tinf <= r.best_tinf + 1e-12
