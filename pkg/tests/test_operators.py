import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pettylab import bodies as bd, measure as ms, operators as op
from pettylab.errors import ParameterError, UnsupportedBodyError

S = bd.MatShape
seeds = st.integers(0, 10_000)
HALF = bd.Segment(S(1, 1), [-0.5], [0.5])
SYM = bd.Segment(S(1, 1), [-1.0], [1.0])
TRI = bd.make_standard("simplex_orth", S(1, 2))


def test_classical_petty_square_closed_form():
    est = op.petty_product(bd.make_standard("cube", S(2, 1)), HALF, 1)
    assert est.method == "exact"
    assert est.value == pytest.approx(2.0, abs=1e-9)


def test_classical_petty_disk():
    est = op.petty_product(bd.Ball(S(2, 1)), HALF, 1)
    assert est.value == pytest.approx(math.pi ** 2 / 4, rel=5e-3)


def test_projection_body_of_square():
    # classical projection body: h(x) = width of the shadow = 2(|x1| + |x2|)
    pb = op.projection_body(bd.make_standard("cube", S(2, 1)), HALF, 1)
    X = np.array([[1.0, 0.0], [1.0, 1.0], [-2.0, 0.5]])
    assert np.allclose(pb.support(X), 2 * np.abs(X).sum(axis=1))


def test_asymmetric_q_weights():
    # Q = [-a, b]: h^p = b^p h_{Pi+}^p + a^p h_{Pi-}^p with kernels <u,x>_+ and <u,x>_-
    a, b, p = 0.3, 1.7, 2.0
    K = bd.random_polytope(S(2, 1), 7, 4)
    pb = op.projection_body(K, bd.Segment(S(1, 1), [-a], [b]), p)
    mu = ms.surface_measure_p(K, p)
    X = np.random.default_rng(0).standard_normal((10, 2))
    t = X @ mu.directions.T
    expect = (b ** p * np.maximum(t, 0) ** p @ mu.weights + a ** p * np.maximum(-t, 0) ** p @ mu.weights)
    assert np.allclose(pb.power_support(X), expect, rtol=1e-12)


def test_projection_body_rejects_small_p():
    with pytest.raises(ParameterError):
        op.projection_body(bd.make_standard("cube", S(2, 1)), HALF, 0.5)


def test_projection_body_rejects_oracle_bodies():
    K = bd.SupportOracle(S(2, 1), lambda X: np.linalg.norm(X, axis=-1))
    with pytest.raises(UnsupportedBodyError):
        op.projection_body(K, HALF, 1)


def test_fixed_point_constants():
    assert op.fixed_point_constant(2, 1, 1) == pytest.approx(1 / (3 * math.pi), rel=1e-12)
    assert op.fixed_point_constant(2, 2, 2) == pytest.approx(math.sqrt(1 / (3 * math.pi)), rel=1e-12)
    assert op.fixed_point_constant(2, 2, 2) == pytest.approx(0.32574, abs=1e-5)


def test_centroid_body_of_disk():
    # (1/pi) * integral over the disk of |x1| = 4 / (3 pi)
    G = op.centroid_body(bd.Ball(S(2, 1)), SYM, 1, quad=ms.sphere_quadrature(2, size=2048))
    assert G.support([1.0, 0.0]) == pytest.approx(4 / (3 * math.pi), rel=1e-6)
    Gs = op.centroid_body(bd.Ball(S(2, 1)), SYM, 1, N=200_000, seed=2, method="sample")
    assert Gs.support([0.0, 1.0]) == pytest.approx(4 / (3 * math.pi), rel=1e-2)


def test_duality_analytic_case():
    q = ms.sphere_quadrature(2, ms.PRODUCT, 4096)
    rep = op.duality_check(bd.Ball(S(2, 1)), bd.Ball(S(2, 1)), SYM, 1, q, gamma="polar")
    c = rep.cases[0]
    assert c.lhs == pytest.approx(4 * math.pi, rel=1e-6)
    assert c.rhs == pytest.approx(4 * math.pi, rel=1e-6)
    assert rep.verdict


def test_pi_infinity_of_disk_is_disk():
    h = op.pi_infinity(bd.Ball(S(2, 1)), SYM)
    X = np.random.default_rng(1).standard_normal((20, 2))
    assert np.allclose(h.support(X), np.linalg.norm(X, axis=1))


def test_opnorm_ball_of_euclidean_pair_is_spectral():
    B = op.opnorm_ball(bd.Ball(S(2, 1)), bd.Ball(S(2, 1)))
    X = np.random.default_rng(2).standard_normal((50, 4))
    assert np.allclose(B.gauge(X), np.linalg.norm(X.reshape(50, 2, 2), ord=2, axis=(1, 2)), rtol=1e-9)


def test_projection_body_json_round_trip():
    pb = op.projection_body(bd.random_polytope(S(2, 1), 8, 1), TRI, 2)
    back = op.ProjectionBody.from_json(pb.to_json())
    X = np.random.default_rng(3).standard_normal((8, 4))
    assert np.allclose(back.support(X), pb.support(X), rtol=1e-14)


@given(seeds, st.sampled_from([1.0, 2.0, 3.5]))
def test_projection_body_linear_equivariance(seed, p):
    # Pi_p(A K) = |det A|^(1/p) A^(-t) Pi_p K
    g = np.random.default_rng(seed)
    K = bd.random_polytope(S(2, 1), 8, seed)
    A = g.standard_normal((2, 2)) + 2 * np.eye(2)
    AK = bd.transform(K, left=A)
    X = g.standard_normal((10, 2, 2))
    lhs = op.projection_body(AK, TRI, p).support(X.reshape(10, 4))
    Y = np.einsum("ij,kjc->kic", np.linalg.inv(A), X)
    rhs = abs(np.linalg.det(A)) ** (1 / p) * op.projection_body(K, TRI, p).support(Y.reshape(10, 4))
    assert np.allclose(lhs, rhs, rtol=1e-9)


@given(seeds)
def test_petty_product_is_affine_invariant(seed):
    g = np.random.default_rng(seed)
    K = bd.random_polytope(S(2, 1), 7, seed)
    A = g.standard_normal((2, 2)) + 2 * np.eye(2)
    a = op.petty_product(K, HALF, 1).value
    b = op.petty_product(bd.translate(bd.transform(K, left=A), g.standard_normal(2)), HALF, 1).value
    assert b == pytest.approx(a, rel=1e-9)


@given(seeds)
def test_classical_petty_inequality(seed):
    K = bd.random_polytope(S(2, 1), 9, seed)
    assert op.petty_product(K, HALF, 1).value <= math.pi ** 2 / 4 * (1 + 1e-9)


@given(seeds)
def test_projection_support_is_sublinear(seed):
    g = np.random.default_rng(seed)
    pb = op.projection_body(bd.random_polytope(S(2, 1), 8, seed), TRI, 2.5)
    x, y = g.standard_normal((2, 4))
    assert pb.support(x + y) <= pb.support(x) + pb.support(y) + 1e-12


@given(seeds)
def test_centroid_support_bounded_by_gamma_infinity(seed):
    # the Lp mean of h_Q(v.x) over L never exceeds its maximum
    L = bd.random_polytope(S(2, 1), 8, seed)
    G = op.centroid_body(L, SYM, 2, N=5000, seed=seed)
    Ginf = op.gamma_infinity(L, SYM)
    V = np.random.default_rng(seed).standard_normal((10, 2))
    assert np.all(G.support(V) <= Ginf.support(V) * (1 + 1e-12))
