import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pettylab import bodies as bd, measure as ms
from pettylab.errors import MeasureUndefinedError, NotStarBodyError, ParameterError

S = bd.MatShape
seeds = st.integers(0, 10_000)


def test_sphere_areas():
    assert ms.sphere_area(2) == pytest.approx(2 * math.pi)
    assert ms.sphere_area(3) == pytest.approx(4 * math.pi)
    assert ms.sphere_area(4) == pytest.approx(2 * math.pi ** 2)


@pytest.mark.parametrize("d", [2, 3])
def test_product_rule_integrates_quadratics(d):
    q = ms.sphere_quadrature(d, size=4096)
    assert q.scheme == ms.PRODUCT
    est = q.integrate(q.flat_nodes[:, 0] ** 2)
    assert est.stderr == 0.0
    assert est.value == pytest.approx(ms.sphere_area(d) / d, rel=1e-12)


@pytest.mark.parametrize("scheme", [ms.MC, ms.LOW_DISCREPANCY])
def test_randomized_rule_has_honest_error(scheme):
    q = ms.sphere_quadrature(4, scheme, size=4096, seed=5, replicates=8)
    est = q.integrate(q.flat_nodes[:, 0] ** 2)
    assert len(est.replicates) == 8
    assert est.stderr > 0
    assert abs(est.value - math.pi ** 2 / 2) <= 4 * est.stderr


def test_quadrature_is_seeded():
    a = ms.sphere_quadrature(4, ms.LOW_DISCREPANCY, size=256, seed=7)
    b = ms.sphere_quadrature(4, ms.LOW_DISCREPANCY, size=256, seed=7)
    c = ms.sphere_quadrature(4, ms.LOW_DISCREPANCY, size=256, seed=8)
    assert np.array_equal(a.nodes, b.nodes)
    assert not np.array_equal(a.nodes, c.nodes)


def test_quadrature_json_round_trip():
    q = ms.sphere_quadrature(3, ms.MC, size=64, seed=1, replicates=2)
    r = ms.SphereQuadrature.from_json(q.to_json())
    assert np.array_equal(q.nodes, r.nodes) and r.scheme == ms.MC


def test_square_surface_measure():
    u, b, a = ms.surface_measure(bd.make_standard("cube", S(2, 1)))
    assert len(u) == 4
    assert np.allclose(b, 1.0) and np.allclose(a, 2.0)
    # closed polytopes have centered surface measures
    assert np.allclose(a @ u, 0.0)


def test_lp_surface_measure_needs_interior_origin():
    tri = bd.make_standard("simplex_orth", S(2, 1))
    with pytest.raises(MeasureUndefinedError):
        ms.surface_measure_p(tri, 2)
    mu = ms.surface_measure_p(tri, 1)
    assert mu.total() == pytest.approx(2 + math.sqrt(2))


@given(seeds, st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_lp_mixed_volume_of_body_with_itself(seed, p):
    K = bd.random_polytope(S(2, 1), 9, seed)
    assert ms.lp_mixed_volume(K, K, p) == pytest.approx(K.volume(), rel=1e-10)


@given(seeds)
def test_minkowski_first_inequality(seed):
    K = bd.random_polytope(S(3, 1), 12, seed)
    L = bd.random_polytope(S(3, 1), 12, seed + 1)
    lhs = ms.lp_mixed_volume(K, L, 1) ** 3
    assert lhs >= K.volume() ** 2 * L.volume() * (1 - 1e-10)


def test_mixed_volume_with_ball_is_mean_width():
    # V_1(K, B) in the plane is perimeter / 2
    K = bd.make_standard("cube", S(2, 1))
    assert ms.lp_mixed_volume(K, bd.Ball(S(2, 1)), 1) == pytest.approx(4.0)


def test_dual_mixed_volume_reduces_to_volume():
    q = ms.sphere_quadrature(2, size=20000)
    K = bd.regular_polygon(6)
    est = ms.dual_mixed_volume(K, K, 2, q)
    assert est.value == pytest.approx(K.volume(), rel=1e-6)


def test_dual_mixed_volume_of_balls():
    # (1/2) * integral of 1 * (1/4)^(-1)... rho_K = 1, rho_L = 1/4, p = 1: (1/2) 2pi 4 = 4pi
    q = ms.sphere_quadrature(2, size=64)
    est = ms.dual_mixed_volume(bd.Ball(S(2, 1)), bd.Ball(S(2, 1), 0.25), 1, q)
    assert est.value == pytest.approx(4 * math.pi, rel=1e-12)


def test_radial_volume_formula():
    # vol(K) = (1/d) * integral of gauge^(-d); applied to a polar body it gives vol(K^o)
    q = ms.sphere_quadrature(3, size=512)
    B = bd.Ball(S(3, 1), 2.0)
    assert ms.polar_volume(B, q).value == pytest.approx(4 / 3 * math.pi * 8, rel=1e-12)
    assert ms.polar_volume(bd.polar(B), q).value == pytest.approx(4 / 3 * math.pi / 8, rel=1e-12)


def test_polar_volume_rejects_boundary_origin():
    q = ms.sphere_quadrature(2, size=64)
    with pytest.raises(NotStarBodyError):
        ms.polar_volume(bd.make_standard("simplex_orth", S(2, 1)), q)


def test_mc_volume_of_square():
    est = ms.volume(bd.make_standard("cube", S(2, 1)), "mc-membership", N=100_000, seed=3, box=1.5)
    assert abs(est.value - 4.0) <= 4 * est.stderr


def test_volume_methods():
    K = bd.make_standard("cube", S(3, 1))
    assert ms.volume(K).value == pytest.approx(8.0)
    with pytest.raises(ParameterError):
        ms.volume(K, "polar-formula")
    with pytest.raises(ParameterError):
        ms.volume(K, "nonsense")


def test_centroid_of_triangle():
    tri = bd.make_standard("simplex_orth", S(2, 1))
    assert np.allclose(ms.centroid(tri), [1 / 3, 1 / 3])


def test_santalo_point_of_translated_square():
    K = bd.translate(bd.make_standard("cube", S(2, 1)), [0.3, -0.2])
    assert np.allclose(ms.santalo_point(K), [0.3, -0.2], atol=1e-6)


def test_santalo_point_of_triangle_is_centroid():
    # for triangles the Santalo point and the centroid coincide
    tri = bd.make_standard("simplex_orth", S(2, 1))
    assert np.allclose(ms.santalo_point(tri), [1 / 3, 1 / 3], atol=1e-6)


def test_paired_difference_uses_replicates():
    a = ms.VolumeEstimate.from_replicates([1.0, 2.0, 3.0, 4.0], ms.MC)
    b = ms.VolumeEstimate.from_replicates([0.5, 1.5, 2.5, 3.5], ms.MC)
    d, se = ms.difference(a, b)
    assert d == pytest.approx(0.5) and se == pytest.approx(0.0, abs=1e-15)
    assert a.stderr > 0


def test_volume_estimate_json():
    a = ms.VolumeEstimate.from_replicates([1.0, 2.0], ms.MC)
    assert ms.VolumeEstimate.from_json(a.to_json()) == a
