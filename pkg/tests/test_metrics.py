import math

import numpy as np
import pytest

from conftest import naive_tinf, random_weights
from ifcluster.errors import StructureError, UndefinedRatioError
from ifcluster.metrics import class_cut, class_sums, class_weight, tinf
from ifcluster.model import BsPartition, ClusterSystem

W22 = [[2, 1], [0, 3]]


def system(bs, users, off=()):
    return ClusterSystem(BsPartition(bs), users, frozenset(off))


def random_system(rng, b, u):
    M = int(rng.integers(1, b + 1))
    bs_lab = rng.permutation(np.concatenate([np.arange(M), rng.integers(0, M, b - M)]))
    return ClusterSystem.from_labels(bs_lab, rng.integers(0, M, u), M)


def test_class_weight():
    diag = system(((0,), (1,)), ((0,), (1,)))
    assert class_weight(diag, W22, 0) == 2
    assert class_weight(system(((0, 1),), ((0, 1),)), W22, 0) == 6
    assert class_weight(system(((0,), (1,)), ((0, 1), ())), W22, 1) == 0


def test_class_cut():
    assert class_cut(system(((0,), (1,)), ((0,), (1,))), W22, 0) == 1
    assert class_cut(system(((0, 1),), ((0, 1),)), W22, 0) == 0
    assert class_cut(system(((0,), (1,)), ((1,), (0,))), W22, 0) == 5


def test_class_index_out_of_range():
    with pytest.raises(StructureError):
        class_weight(system(((0, 1),), ((0, 1),)), W22, 1)


def test_tinf_two_by_two():
    br = tinf(system(((0,), (1,)), ((0,), (1,))), W22)
    assert br.total == pytest.approx(5 / 6, rel=1e-15)
    assert [t.ratio for t in br.per_class] == [pytest.approx(0.5), pytest.approx(1 / 3)]


def test_skipped_class():
    br = tinf(system(((0,), (1,)), ((0, 1), ())), [[2, 1], [1, 3]])
    assert br.per_class[1].skipped
    assert br.total == pytest.approx((1 + 3) / 3)
    d = br.to_dict()
    assert d["classes"][1]["skipped"] is True and d["classes"][1]["ratio"] is None


def test_undefined_ratio_names_class():
    with pytest.raises(UndefinedRatioError) as e:
        tinf(system(((0,), (1,)), ((0,), (1,))), [[1, 1], [1, 0]])
    assert e.value.cls == 1


def test_diagnostic_on_invalid_system():
    # user 1 sits in class 0 without an edge to BS 0, but class 0 still has weight
    s = system(((0,), (1,)), ((0, 1), ()))
    assert tinf(s, [[1, 0], [0, 1]]).total == pytest.approx(1.0)


def test_switched_off_rows_ignored():
    w = [[2, 1], [0, 3], [5, 5]]
    s = system(((0,), (1,)), ((0,), (1,)), off=(2,))
    assert tinf(s, w).total == pytest.approx(5 / 6)


def test_single_class_is_zero(rng):
    for _ in range(20):
        w = random_weights(rng, 5, 7)
        assert tinf(system((tuple(range(5)),), (tuple(range(7)),)), w).total == 0


def test_matches_naive_summation(rng):
    for _ in range(200):
        b, u = int(rng.integers(1, 7)), int(rng.integers(1, 9))
        w = random_weights(rng, b, u)
        s = random_system(rng, b, u)
        try:
            got = tinf(s, w).total
        except UndefinedRatioError:
            with pytest.raises(ZeroDivisionError):
                naive_tinf(s.bs_classes, s.user_classes, w.tolist())
            continue
        assert got == pytest.approx(naive_tinf(s.bs_classes, s.user_classes, w.tolist()), rel=1e-12)


def test_properties(rng):
    for _ in range(200):
        b, u = int(rng.integers(1, 7)), int(rng.integers(1, 9))
        w = random_weights(rng, b, u)
        s = random_system(rng, b, u)
        weight, cut = class_sums(s, w)
        # every intra edge counted once, every cross edge in exactly two cuts
        assert weight.sum() + cut.sum() / 2 == pytest.approx(w.sum(), rel=1e-12)
        try:
            t = tinf(s, w).total
        except UndefinedRatioError:
            continue
        assert t >= 0
        bl, ul = s.bs_labels(b), s.user_labels(u)
        crossing = (w > 0) & (bl[:, None] != ul[None, :])
        assert (t == 0) == (not crossing.any())
        for c in (0.5, 3.0, 10.0):
            assert tinf(s, w * c).total == pytest.approx(t, rel=1e-12, abs=1e-15)
