import math

import numpy as np
import pytest

from conftest import random_weights
from ifcluster.errors import StructureError
from ifcluster.similarity import gram_init, gram_merge, rho


def cosine(a, b):
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    return 0.0 if na == 0 or nb == 0 else float(a @ b / (na * nb))


@pytest.mark.parametrize("w, expected", [
    ([[1, 0], [0, 1]], [[1, 0], [0, 1]]),
    ([[1, 1], [2, 2]], [[2, 4], [4, 8]]),
    ([[1, 0], [1, 1]], [[1, 1], [1, 2]]),
])
def test_gram_init(w, expected):
    np.testing.assert_array_equal(gram_init(w).dot, expected)


@pytest.mark.parametrize("w, expected", [
    ([[1, 0], [0, 1]], 0.0),
    ([[1, 1], [2, 2]], 1.0),
    ([[1, 0], [1, 1]], 1 / math.sqrt(2)),
])
def test_rho_examples(w, expected):
    assert rho(gram_init(w), 0, 1) == pytest.approx(expected, rel=1e-15)


def test_rho_zero_vector_is_zero():
    t = gram_init([[0, 0], [1, 1], [1, 0]])
    assert rho(t, 0, 1) == 0 and rho(t, 0, 2) == 0


def test_merge_pythagoras():
    t = gram_init([[1, 0], [0, 1]])
    s = gram_merge(t, 1, 0)
    assert s == 0
    assert t.dot[0, 0] == 2
    assert not t.alive[1]


def test_merge_bilinear():
    t = gram_init([[1, 0], [1, 1], [0, 1]])
    s = gram_merge(t, 0, 1)
    assert t.dot[s, 2] == 1 and t.dot[2, s] == 1


def test_dead_slot_access():
    t = gram_init([[1, 0], [1, 1], [0, 1]])
    gram_merge(t, 0, 1)
    with pytest.raises(StructureError):
        rho(t, 1, 2)
    with pytest.raises(StructureError):
        gram_merge(t, 1, 2)
    with pytest.raises(StructureError):
        rho(t, 0, 0)


def test_incremental_matches_rebuild(rng):
    for _ in range(30):
        b, u = int(rng.integers(3, 15)), int(rng.integers(2, 12))
        w = random_weights(rng, b, u, density=0.4, ensure_served=False)
        t = gram_init(w)
        members = {i: [i] for i in range(b)}
        while len(members) > 1:
            k, m = (int(x) for x in rng.choice(sorted(members), 2, replace=False))
            merged = members.pop(k) + members.pop(m)
            members[gram_merge(t, k, m)] = merged
            assert sorted(members) == t.alive_slots().tolist()
            vecs = {x: w[ids].sum(axis=0) for x, ids in members.items()}
            for x in members:
                for y in members:
                    assert t.dot[x, y] == pytest.approx(vecs[x] @ vecs[y], rel=1e-9, abs=1e-300)
                    if x < y:
                        r = rho(t, x, y)
                        assert 0 <= r <= 1
                        assert r == pytest.approx(cosine(vecs[x], vecs[y]), rel=1e-9, abs=1e-12)


def test_rho_scale_invariant(rng):
    w = random_weights(rng, 8, 10)
    t1, t2 = gram_init(w), gram_init(w * 7.5)
    for k in range(8):
        for m in range(k + 1, 8):
            assert rho(t1, k, m) == pytest.approx(rho(t2, k, m), rel=1e-12, abs=1e-15)


def test_gram_symmetric_psd(rng):
    w = random_weights(rng, 10, 6)
    t = gram_init(w)
    gram_merge(t, 2, 5)
    gram_merge(t, 0, 7)
    alive = t.alive_slots()
    sub = t.dot[np.ix_(alive, alive)]
    np.testing.assert_array_equal(sub, sub.T)
    assert np.linalg.eigvalsh(sub).min() > -1e-12
