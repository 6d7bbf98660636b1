import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pettylab import bodies as bd, hull, symmetrize as sy
from pettylab.harness.suites import random_star

S = bd.MatShape
seeds = st.integers(0, 10_000)
HALF = bd.Segment(S(1, 1), [-0.5], [0.5])


def unit(g, d):
    v = g.standard_normal(d)
    return v / np.linalg.norm(v)


def perimeter(K):
    P = hull.polygon_order(K.vertices)
    return np.linalg.norm(np.roll(P, -1, axis=0) - P, axis=1).sum()


def test_square_along_axis_is_fixed():
    K = bd.make_standard("cube", S(2, 1))
    SK = sy.steiner_classical(K, [1.0, 0.0])
    X = np.random.default_rng(0).standard_normal((20, 2))
    assert np.allclose(SK.support(X), K.support(X), atol=1e-12)


def test_triangle_becomes_kite():
    # symmetrizing conv{o, e1, e2} along e2 gives chords of length 1 - x over x in [0, 1]
    SK = sy.steiner_classical(bd.make_standard("simplex_orth", S(2, 1)), [0.0, 1.0])
    assert SK.volume() == pytest.approx(0.5, abs=1e-12)
    assert SK.support([0.0, 1.0]) == pytest.approx(0.5)
    assert SK.support([1.0, 0.0]) == pytest.approx(1.0)


def test_reflection():
    assert np.allclose(sy.reflect(np.array([1.0, 2.0]), np.array([0.0, 1.0])), [1.0, -2.0])


@given(seeds)
def test_area_preserved_and_idempotent(seed):
    g = np.random.default_rng(seed)
    K = bd.random_polytope(S(2, 1), 8, seed)
    v = unit(g, 2)
    SK = sy.steiner_classical(K, v)
    assert SK.volume() == pytest.approx(K.volume(), abs=1e-12 * max(1, K.volume()))
    SSK = sy.steiner_classical(SK, v)
    X = g.standard_normal((30, 2))
    assert np.allclose(SSK.support(X), SK.support(X), atol=1e-9)
    # symmetric under reflection in v-perp
    R = np.eye(2) - 2 * np.outer(v, v)
    assert np.allclose(SK.support(X @ R), SK.support(X), atol=1e-9)


@given(seeds)
def test_perimeter_does_not_increase(seed):
    g = np.random.default_rng(seed)
    K = bd.random_polytope(S(2, 1), 8, seed)
    assert perimeter(sy.steiner_classical(K, unit(g, 2))) <= perimeter(K) * (1 + 1e-12)


@given(st.integers(0, 2000))
def test_volume_preserved_in_space(seed):
    g = np.random.default_rng(seed)
    K = bd.random_polytope(S(3, 1), 10, seed)
    SK = sy.steiner_classical(K, unit(g, 3))
    assert SK.volume() == pytest.approx(K.volume(), rel=1e-10)


def test_disk_is_fixed():
    D = sy.steiner_classical(bd.Ball(S(2, 1), 2.0, [0.3, 0.1]), [1.0, 0.0])
    assert np.allclose(D.center, [0.0, 0.1])


def test_sequence_approaches_disk():
    K = bd.random_polytope(S(2, 1), 8, 5)
    out, trace = sy.steiner_sequence(K, rounds=200, seed=1)
    assert np.allclose(trace.area, K.volume(), rtol=1e-12)
    assert trace.reached is not None
    assert trace.distance[-1] < trace.distance[0]


def test_hausdorff_to_disk_of_square():
    P = np.array([[1, 1], [-1, 1], [-1, -1], [1, -1.0]])
    assert sy.hausdorff_to_disk(P, 1.0) == pytest.approx(math.sqrt(2) - 1)


@given(seeds)
def test_mth_order_reduces_to_classical(seed):
    g = np.random.default_rng(seed)
    K = bd.random_polytope(S(2, 1), 8, seed)
    v = unit(g, 2)
    A = sy.steiner_mth(K, v)
    B = sy.steiner_classical(K, v)
    X = g.uniform(-3, 3, (400, 2))
    inB = B.contains(X, tol=0.0)
    inA = A.contains(X, tol=0.0)
    near = np.abs(B.gauge(X) - 1) < 1e-7
    assert np.all((inA == inB) | near)


def test_volume_gain_is_nonnegative():
    L = random_star(S(2, 2), np.random.default_rng(1), "box")
    gain, vL, vS = sy.symmetral_volume_gain(L, np.array([0.6, 0.8]), N=100_000, seed=2)
    assert gain.value >= -3 * gain.stderr


@pytest.mark.parametrize("seed", [1, 2])
def test_inclusion_lemma(seed):
    K = bd.random_polytope(S(2, 1), 8, seed)
    rep = sy.inclusion_check(K, HALF, 1, np.array([1.0, 0.0]), N=5000, seed=seed)
    assert rep.verdict
