import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from pettylab import hull, lp


def test_cube_volume_and_facets():
    V = np.array(np.meshgrid([-1, 1], [-1, 1], [-1, 1], indexing="ij"), float).reshape(3, -1).T
    u, b, a = hull.facets(V)
    assert hull.volume(V) == pytest.approx(8.0)
    assert len(u) == 6
    assert np.allclose(b, 1.0)
    assert np.allclose(a, 4.0)


def test_interior_points_are_dropped():
    P = np.array([[0, 0], [1, 0], [0, 1], [1, 1], [0.5, 0.5], [0.2, 0.7]])
    assert len(hull.extreme_points(P)) == 4


def test_polygon_area_shoelace():
    P = np.array([[0, 0], [3, 0], [3, 2], [0, 2.0]])
    assert hull.polygon_area(P) == pytest.approx(6.0)


@given(st.integers(0, 10_000))
def test_facet_areas_sum_to_perimeter(seed):
    g = np.random.default_rng(seed)
    V = hull.extreme_points(g.standard_normal((12, 2)))
    P = hull.polygon_order(V)
    perim = np.linalg.norm(np.roll(P, -1, axis=0) - P, axis=1).sum()
    _, _, a = hull.facets(V)
    assert a.sum() == pytest.approx(perim, rel=1e-12)


@given(st.integers(0, 10_000))
def test_minkowski_sum_support_adds(seed):
    g = np.random.default_rng(seed)
    A, B = g.standard_normal((6, 2)), g.standard_normal((5, 2))
    M = hull.minkowski_sum(A, B)
    x = g.standard_normal(2)
    assert (M @ x).max() == pytest.approx((A @ x).max() + (B @ x).max(), rel=1e-12, abs=1e-12)


@given(st.integers(0, 10_000))
def test_simplex_matches_highs(seed):
    g = np.random.default_rng(seed)
    A = g.uniform(0.1, 2.0, (5, 4))
    b = g.uniform(1.0, 3.0, 5)
    c = -g.uniform(0.1, 1.0, 4)
    mine = lp.solve(c, A_ub=A, b_ub=b)
    ref = linprog(c, A_ub=A, b_ub=b, bounds=[(0, None)] * 4, method="highs")
    assert mine.status == "optimal"
    assert mine.fun == pytest.approx(ref.fun, rel=1e-9, abs=1e-12)


@given(st.integers(0, 10_000))
def test_polytope_gauge_lp(seed):
    # the gauge of a square's vertex hull is the max norm
    g = np.random.default_rng(seed)
    V = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1.0]])
    x = g.standard_normal(2)
    assert lp.polytope_gauge(V, x) == pytest.approx(np.abs(x).max(), rel=1e-9)


def test_unbounded_and_infeasible():
    r = lp.solve([-1.0, 0.0], A_ub=[[0.0, 1.0]], b_ub=[1.0])
    assert r.status == "unbounded"
    r = lp.solve([1.0], A_ub=[[1.0]], b_ub=[-1.0])
    assert r.status == "infeasible"
