import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pettylab import _accel, kernels


def inputs(seed):
    g = np.random.default_rng(seed)
    qv = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    U = g.standard_normal((64, 2))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    return g, qv, U


@settings(max_examples=15)
@given(st.integers(0, 10_000), st.sampled_from([1.0, 2.0, 2.7]), st.sampled_from([0.0, 1.5]))
def test_lp_sums_agree(seed, p, qball):
    g, qv, U = inputs(seed)
    X = g.standard_normal((50, 2, 2))
    w = g.random(64)
    a = kernels.lp_sum_points_loop(X, U, w, qv, qball, p)
    b = kernels.lp_sum_points_vec(X, U, w, qv, qball, p)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-14)
    V = g.standard_normal((30, 2))
    a = kernels.lp_sum_dirs_loop(V, X, w[:50], qv, qball, p)
    b = kernels.lp_sum_dirs_vec(V, X, w[:50], qv, qball, p)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


@settings(max_examples=15)
@given(st.integers(0, 10_000))
def test_norm_kernels_agree(seed):
    g = np.random.default_rng(seed)
    X = g.standard_normal((200, 2, 2))
    E = g.standard_normal((7, 2))
    assert np.allclose(kernels.max_image_norm_loop(X, E), kernels.max_image_norm_vec(X, E), rtol=1e-12)
    s = kernels.spectral_norm_loop(X, 1e-14, 10_000)
    assert np.allclose(s, kernels.spectral_norm_vec(X, 1e-14, 10_000), rtol=1e-10)
    assert np.allclose(s, np.linalg.norm(X, ord=2, axis=(1, 2)), rtol=1e-10)
    V = g.standard_normal((20, 2))
    qv = g.standard_normal((5, 2))
    assert np.allclose(kernels.max_pair_loop(V, X, qv, 0.0), kernels.max_pair_vec(V, X, qv, 0.0), rtol=1e-12)


def test_lp_sum_against_direct_formula():
    # sum_k w_k h_Q(u_k^t . x)^p with Q = conv{o, e1, e2}: h_Q(y) = max(0, y1, y2)
    g, qv, U = inputs(0)
    X = g.standard_normal((5, 2, 2))
    w = g.random(64)
    Y = np.einsum("ki,jic->jkc", U, X)
    h = np.maximum(0, Y.max(axis=2))
    assert np.allclose(kernels.lp_sum_points(X, U, w, qv, 0.0, 3.0), (h ** 3) @ w, rtol=1e-12)


def test_fiber_of_square_and_triangle():
    C = np.array([[[1.0, 0], [-1, 0], [0, 1], [0, -1]]])[0]
    R = np.array([[0.5, 0.5], [1.5, 0.0]])
    member, area, sym = kernels.fiber_polygons(C, np.ones((2, 4)), R, 4.0)
    assert np.allclose(area, 4.0) and np.allclose(sym, 4.0)
    assert member.tolist() == [True, False]
    # (T - T)/2 of a triangle is a hexagon of area 3/2 |T|
    C = np.array([[-1.0, 0], [0, -1], [1, 1]])
    member, area, sym = kernels.fiber_polygons(C, np.array([[0.0, 0, 1]]), np.zeros((1, 2)), 4.0)
    assert area[0] == pytest.approx(0.5) and sym[0] == pytest.approx(0.75)


def test_backend_flag():
    assert _accel.backend() == ("numba" if _accel.USE_NUMBA else "numpy")


def test_numpy_fallback_gives_same_numbers():
    code = ("from pettylab import _accel, bodies as bd, operators as op\n"
            "K = bd.random_polytope(bd.MatShape(2, 1), 8, 3)\n"
            "Q = bd.make_standard('simplex_orth', bd.MatShape(1, 2))\n"
            "pb = op.projection_body(K, Q, 2)\n"
            "print(_accel.backend(), repr(float(pb.support([0.3, -1.0, 0.7, 0.2]))))\n")
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, PETTYLAB_NUMBA=flag)
        r = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        backend, val = r.stdout.split()
        out[backend] = float(val)
    assert set(out) == {"numba", "numpy"}
    assert out["numba"] == pytest.approx(out["numpy"], rel=1e-13)
