import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pettylab import bodies as bd, sobolev as sb
from pettylab.errors import ParameterError

S = bd.MatShape
HALF = bd.Segment(S(1, 1), [-0.5], [0.5])
SYM = bd.Segment(S(1, 1), [-1.0], [1.0])
TRI = bd.make_standard("simplex_orth", S(1, 2))

# independent radial minimization, frozen
A23 = 2.3404922750


def test_critical_exponent():
    assert sb.critical_exponent(3, 2) == 6
    with pytest.raises(ParameterError):
        sb.critical_exponent(3, 3)


def test_sharp_constants():
    assert sb.aubin_talenti(1, 2) == pytest.approx(2 * math.sqrt(math.pi), rel=1e-14)
    assert sb.aubin_talenti(1, 3) == pytest.approx(3 * (4 * math.pi / 3) ** (1 / 3), rel=1e-14)
    assert sb.aubin_talenti(2, 3) == pytest.approx(A23, rel=1e-9)


@pytest.mark.parametrize("n,p", [(3, 2.0), (3, 1.5), (2, 1.5)])
def test_constant_matches_radial_oracle(n, p):
    # every trial profile is a real Sobolev function, so the oracle can only overshoot
    a = sb.aubin_talenti(p, n)
    m = sb.radial_quotient_minimum(n, p)
    assert a * (1 - 1e-9) <= m <= a * 1.01


def test_d_constant_for_half_segment():
    # d_{2,1}([-1/2, 1/2]) = 2 pi sqrt(pi / 2)
    val, se = sb.sharp_d(2, 1, HALF)
    assert se == 0.0
    assert val == pytest.approx(2 * math.pi * math.sqrt(math.pi / 2), rel=1e-6)


def test_gaussian_norm_closed_form():
    f = sb.gaussian(3)
    # ||exp(-|v|^2)||_q = (pi / q)^(3 / (2q))
    for q in (1.0, 2.0, 6.0):
        assert f.norm(q) == pytest.approx((math.pi / q) ** (1.5 / q), rel=1e-8)


def test_gradient_matches_finite_differences():
    f = sb.extremal_function(3, 2.0, A=np.diag([1.0, 2.0, 0.5]), v0=[0.1, 0, 0], alpha=0.7)
    V = np.random.default_rng(0).standard_normal((10, 3))
    assert np.allclose(f.grad(V), f.fd_grad(V), rtol=1e-6, atol=1e-9)


def test_gaussian_ratio_in_the_plane():
    # n=2, p=1, m=1: ||grad f||_1 / (2 sqrt(pi) ||f||_2) = pi^(3/2) / (2 sqrt(pi) sqrt(pi/2)) = sqrt(pi/2)
    r = sb.sobolev_ratio(sb.gaussian(2), SYM, 1)
    assert r.ratio == pytest.approx(math.sqrt(math.pi / 2), rel=1e-4)


def test_gaussian_ratio_in_space():
    # sqrt(3 (pi/2)^(3/2)) / (a_{2,3} (pi/6)^(1/4)) = 1.2207
    r = sb.sobolev_ratio(sb.gaussian(3), SYM, 2)
    expect = math.sqrt(3 * (math.pi / 2) ** 1.5) / (A23 * (math.pi / 6) ** 0.25)
    assert r.ratio == pytest.approx(expect, rel=1e-3)
    assert r.ratio == pytest.approx(1.2207, abs=1e-4)


def test_extremal_gives_equality():
    r = sb.sobolev_ratio(sb.extremal_function(3, 2.0), SYM, 2)
    assert r.ratio == pytest.approx(1.0, abs=1e-6)


def test_affine_extremal_gives_equality():
    A = np.array([[1.3, 0.2, 0.0], [0.0, 0.8, 0.1], [0.3, 0.0, 1.1]])
    r = sb.sobolev_ratio(sb.extremal_function(3, 2.0, A=A, v0=[0.2, -0.1, 0.3], alpha=2.0), SYM, 2)
    assert 0.95 <= r.ratio <= 1.07


def test_smoothed_indicator_of_square():
    # the projection body of a smoothed indicator approaches the classical one: h(e1) = 2, h(1,1) = 4
    K = bd.make_standard("cube", S(2, 1))
    f = sb.smoothed_indicator(K, width=1e-4)
    pb = sb.function_projection_body(f, HALF, 1)
    assert pb.support([1.0, 0.0]) == pytest.approx(2.0, rel=1e-3)
    assert pb.support([1.0, 1.0]) == pytest.approx(4.0, rel=1e-3)


def test_descriptor_round_trip():
    f = sb.extremal_function(3, 2.0, alpha=0.5)
    g = sb.from_descriptor(f.to_json())
    V = np.random.default_rng(1).standard_normal((5, 3))
    assert np.allclose(f.value(V), g.value(V))
    with pytest.raises(ParameterError):
        sb.from_descriptor({"kind": "bump"})


@settings(max_examples=6)
@given(st.integers(0, 1000), st.sampled_from([1.0, 2.0]))
def test_function_body_equivariance(seed, p):
    # h_{f o A^-1}^p(theta) = |det A| h_f^p(A^-1 theta)
    g = np.random.default_rng(seed)
    A = g.standard_normal((2, 2)) + 2 * np.eye(2)
    f = sb.gaussian(2, A=np.diag([1.0, 0.5]))
    lhs = sb.function_projection_body(f.compose(A), TRI, p, radial=48, sphere=256)
    rhs = sb.function_projection_body(f, TRI, p, radial=48, sphere=256)
    T = g.standard_normal((6, 2, 2))
    Ti = np.einsum("ij,kjc->kic", np.linalg.inv(A), T)
    assert np.allclose(lhs.power_support(T.reshape(6, 4)),
                       abs(np.linalg.det(A)) * rhs.power_support(Ti.reshape(6, 4)), rtol=1e-9)
