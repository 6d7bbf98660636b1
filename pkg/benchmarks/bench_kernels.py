"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5] [--scale 1.0]

Both variants run in the same process: the ``*_loop`` functions are the
compiled kernels (plain Python if numba is switched off with
PETTYLAB_NUMBA=0, which is very slow) and ``*_vec`` is the numpy path.
"""
import argparse
import time

import numpy as np

from pettylab import _accel, kernels


def _time(fn, args, repeat):
    fn(*args)  # compile / warm caches
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def cases(scale, g):
    N = int(32768 * scale)
    qv = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    X = g.standard_normal((N, 2, 2))
    U = g.standard_normal((2048, 2))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    w = g.random(2048)
    yield "lp_sum_points (ball atoms, 4-dim nodes)", kernels.lp_sum_points_loop, kernels.lp_sum_points_vec, \
        (X, U, w, qv, 0.0, 2.0)
    V = g.standard_normal((int(2048 * scale), 2))
    S = g.standard_normal((4096, 2, 2))
    yield "lp_sum_dirs (centroid body support)", kernels.lp_sum_dirs_loop, kernels.lp_sum_dirs_vec, \
        (V, S, g.random(4096), qv, 0.0, 1.0)
    E = g.standard_normal((8, 2))
    yield "max_image_norm (operator-norm gauge)", kernels.max_image_norm_loop, kernels.max_image_norm_vec, \
        (g.standard_normal((int(262144 * scale), 2, 2)), E)
    yield "spectral_norm (2x2 power iteration)", kernels.spectral_norm_loop, kernels.spectral_norm_vec, \
        (g.standard_normal((int(131072 * scale), 2, 2)), 1e-12, 10000)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--scale", type=float, default=1.0)
    a = ap.parse_args(argv)
    g = np.random.default_rng(0)
    print(f"backend: {_accel.backend()}  threads: {_accel.THREADS}  parallel: {_accel.PARALLEL}")
    print(f"{'kernel':42s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s} {'max rel diff':>13s}")
    for name, loop, vec, args in cases(a.scale, g):
        args = tuple(np.ascontiguousarray(x) if isinstance(x, np.ndarray) else x for x in args)
        tl, ol = _time(loop, args, a.repeat)
        tv, ov = _time(vec, args, a.repeat)
        diff = float(np.max(np.abs(ol - ov) / np.maximum(np.abs(ov), 1e-300)))
        print(f"{name:42s} {tl:10.4f} {tv:10.4f} {tv / tl:8.1f} {diff:13.2e}")


if __name__ == "__main__":
    main()
