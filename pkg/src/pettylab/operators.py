"""Lp projection and centroid operators on M[n,m].

For a body K in R^n, a body Q in R^{1×m} containing the origin and p >= 1,
the projection body Pi_{Q,p}K lives in M[n,m] with

    h(x)^p = sum_k alpha_k * h_Q(u_k^t . x)^p,

where (u_k, alpha_k) are the atoms of the Lp surface measure of K (exact for
polytopes, a sphere rule for balls).  The centroid body Gamma_{Q,p}L of a
body L in M[n,m] lives in R^n with

    h(v)^p = sum_j w_j * h_Q(v^t . x_j)^p,

for weighted points x_j representing the normalized volume of L.  Both are
genuine support functions whatever the discretization.
"""
import math

import numpy as np
from scipy.optimize import minimize

from . import bodies as bd
from . import hull, kernels
from .bodies import (Ball, Body, EllipsoidImage, GaugeOracle, MatShape, SupportOracle,
                     VertexPolytope, as_shape)
from .errors import (ParameterError, PolarUndefinedError, ShapeError, UnsupportedBodyError)
from .measure import (PRODUCT, VolumeEstimate, dual_mixed_volume, polar_volume,
                      sphere_area, sphere_quadrature, surface_measure_p)
from .report import CaseRecord, SuiteReport
from .seeding import rng as make_rng
from .tolerance import DEFAULT

BALL_RULE_SIZE = {1: 2, 2: 2048, 3: 2 * 40 * 40}


def _q_args(Q):
    """Fast-path description of Q for the kernels, or None for the generic path."""
    if isinstance(Q, VertexPolytope):
        return np.ascontiguousarray(Q.vertices), 0.0
    if isinstance(Q, Ball) and not np.any(Q.center):
        return np.zeros((1, Q.dim)), Q.radius
    return None


def _check_q(Q, m=None):
    if Q.shape.n != 1:
        raise ShapeError(f"Q must live in R^(1 x m), got shape {Q.shape.n}x{Q.shape.m}")
    if m is not None and Q.shape.m != m:
        raise ShapeError("Q has the wrong number of columns")


def _hq_generic(Q, Y):
    """h_Q on rows of Y (..., m), clipped at zero."""
    flat = Y.reshape(-1, Y.shape[-1])
    return np.maximum(np.asarray(Q.support(flat), dtype=float), 0.0).reshape(Y.shape[:-1])


class ProjectionBody(Body):
    """Support h(x) = (sum_k alpha_k h_Q(u_k^t.x)^p)^(1/p) on M[n,m]."""

    kind = "projection_body"

    def __init__(self, directions, alphas, Q, p, source=None):
        U = np.array(directions, dtype=float, ndmin=2)
        a = np.asarray(alphas, dtype=float).ravel()
        if len(U) != len(a):
            raise ParameterError("one weight per direction")
        if np.any(a < 0):
            raise ParameterError("weights must be nonnegative")
        if p < 1:
            raise ParameterError(f"p must be at least 1, got {p}")
        _check_q(Q)
        self.directions = U
        self.alphas = a
        self.Q = Q
        self.p = float(p)
        self.shape = MatShape(U.shape[1], Q.shape.m)
        self.source = source or {}
        self._fast = _q_args(Q)

    def power_support(self, x):
        """h(x)^p, avoiding the root."""
        X, single = bd.flat_points(self.shape, x)
        v = self._power(X)
        return float(v[0]) if single else v

    def _power(self, X):
        n, m = self.shape.n, self.shape.m
        X3 = X.reshape(len(X), n, m)
        if self._fast is not None:
            qv, qb = self._fast
            return kernels.lp_sum_points(X3, self.directions, self.alphas, qv, qb, self.p)
        Y = np.einsum("ki,jic->jkc", self.directions, X3)
        return _hq_generic(self.Q, Y) ** self.p @ self.alphas

    def _support(self, X):
        return self._power(X) ** (1.0 / self.p)

    def total_mass(self):
        return float(self.alphas.sum())

    def to_polytope(self):
        """Pi K as a vertex polytope (p = 1, polytope Q, n*m <= 3)."""
        if self.p != 1 or not isinstance(self.Q, VertexPolytope) or self.dim > 3:
            raise UnsupportedBodyError("exact projection polytopes need p = 1, a polytope Q and n*m <= 3")
        P = np.zeros((1, self.dim))
        for u, a in zip(self.directions, self.alphas):
            piece = a * np.einsum("i,qc->qic", u, self.Q.vertices).reshape(len(self.Q.vertices), -1)
            P = hull.minkowski_sum(P, piece)
        return VertexPolytope(self.shape, P)

    def min_support(self, samples=4096, seed=0):
        """min of h over unit x (sampled, then refined locally)."""
        g = make_rng(seed, "min_support", self.dim)
        X = g.standard_normal((samples, self.dim))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        h = self._support(X)
        best = np.argsort(h)[:5]
        f = lambda y: float(self._support((y / np.linalg.norm(y))[None])[0])
        vals = [minimize(f, X[i], method="Nelder-Mead", options={"xatol": 1e-9, "fatol": 1e-12}).fun
                for i in best]
        return float(min(min(vals), h.min()))

    def to_json(self):
        return {"shape": self.shape.as_list(), "kind": "projection_body", "p": self.p,
                "Q": self.Q.to_json(), "directions": self.directions.tolist(),
                "alphas": self.alphas.tolist(), "source": self.source}

    @classmethod
    def from_json(cls, doc):
        return cls(doc["directions"], doc["alphas"], bd.from_json(doc["Q"]), doc["p"], doc.get("source"))


class PolarProjectionBody(GaugeOracle):
    """(Pi_{Q,p}K)^o: its gauge is the support of the projection body."""

    kind = "polar_projection_body"

    def __init__(self, pb):
        self.pb = pb
        self.shape = pb.shape
        self._radius = None

    def _gauge(self, X):
        return self.pb._support(X)

    def power_gauge(self, X):
        return self.pb._power(X)

    def bounding_radius(self):
        if self._radius is None:
            self._radius = 1.0 / self.pb.min_support()
        return self._radius

    def to_json(self):
        return {"kind": "polar_projection_body", "body": self.pb.to_json()}


def ball_atoms(n, size=None, radius=1.0, center=None, p=1.0):
    """Atoms of sigma_{K,p} for K a ball in R^n via a product sphere rule."""
    q = sphere_quadrature(n, PRODUCT, size or BALL_RULE_SIZE[n])
    U = q.nodes[0]
    w = q.weights[0] * radius ** (n - 1)
    if center is not None and np.any(center):
        h = radius + U @ np.asarray(center, dtype=float)
        if p > 1 and np.any(h <= 0):
            raise PolarUndefinedError("origin is not interior")
        w = w * h ** (1.0 - p)
    else:
        w = w * radius ** (1.0 - p)
    return U, w


def projection_body(K, Q, p, ball_size=None):
    """Pi_{Q,p} K for K a polytope (n <= 3), a ball, or a centered ellipsoid."""
    if p < 1:
        raise ParameterError(f"p must be at least 1, got {p}")
    _check_q(Q)
    if K.shape.m != 1:
        raise ShapeError("K must be a body in R^n (shape n x 1)")
    n = K.shape.n
    if isinstance(K, VertexPolytope):
        mu = surface_measure_p(K, p)
        return ProjectionBody(mu.directions, mu.weights, Q, p, {"K": "polytope"})
    if isinstance(K, Ball):
        U, w = ball_atoms(n, ball_size, K.radius, K.center, p)
        return ProjectionBody(U, w, Q, p, {"K": "ball"})
    if isinstance(K, EllipsoidImage) and K.full_dim and (not np.any(K.center) or p == 1):
        # h_{Pi(A.K)}(x) = |det A|^(1/p) h_{Pi K}(A^{-1}.x), folded into the atoms
        U, w = ball_atoms(n, ball_size, 1.0, None, p)
        A = K.A
        W = U @ np.linalg.inv(A)  # rows A^{-t}u
        norms = np.linalg.norm(W, axis=1)
        return ProjectionBody(W / norms[:, None], abs(np.linalg.det(A)) * w * norms ** p, Q, p,
                              {"K": "ellipsoid"})
    raise UnsupportedBodyError(
        f"projection bodies need a polytope, a ball or an ellipsoid, got {K.kind}; "
        "approximate K by a polytope first (bodies.polytope_from_support)")


def polar_projection_body(K, Q, p, ball_size=None):
    pb = K if isinstance(K, ProjectionBody) else projection_body(K, Q, p, ball_size)
    return PolarProjectionBody(pb)


def polar_polytope_volume(P):
    """vol(P^o) for a vertex polytope P with the origin interior, d <= 3."""
    V = P.vertices
    if P.dim == 1:
        a, b = float(V.min()), float(V.max())
        if not a < 0 < b:
            raise PolarUndefinedError("origin is not interior")
        return 1.0 / b - 1.0 / a
    u, c, _ = P.facets()
    if np.any(c <= 0):
        raise PolarUndefinedError("origin is not interior")
    return hull.volume(u / c[:, None])


def _body_volume(K):
    if isinstance(K, VertexPolytope):
        return K.volume()
    if isinstance(K, (Ball, EllipsoidImage)):
        return K.volume()
    raise UnsupportedBodyError(f"no exact volume for {K.kind}")


def polar_projection_volume(K, Q, p, quad=None, method="auto", ball_size=None):
    """vol_{nm}(Pi^o_{Q,p} K) as a VolumeEstimate."""
    pb = K if isinstance(K, ProjectionBody) else projection_body(K, Q, p, ball_size)
    exact_ok = (pb.p == 1 and isinstance(pb.Q, VertexPolytope) and pb.dim <= 3
                and pb.source.get("K") == "polytope")
    if method == "exact" or (method == "auto" and exact_ok and quad is None):
        return VolumeEstimate(polar_polytope_volume(pb.to_polytope()), 0.0, "exact")
    if quad is None:
        quad = sphere_quadrature(pb.dim)
    return polar_volume(PolarProjectionBody(pb), quad)


def petty_product(K, Q, p, quad=None, method="auto", ball_size=None):
    """vol_{nm}(Pi^o_{Q,p}K) * vol_n(K)^(nm/p - m)."""
    m = Q.shape.m
    d = K.shape.n * m
    v = polar_projection_volume(K, Q, p, quad, method, ball_size)
    f = _body_volume(K) ** (d / p - m)
    reps = None if v.replicates is None else tuple(r * f for r in v.replicates)
    return VolumeEstimate(v.value * f, v.stderr * f, v.method, reps)


class CentroidBody(Body):
    """Support h(v) = (sum_j w_j h_Q(v^t.x_j)^p)^(1/p) on R^n."""

    kind = "centroid_body"

    def __init__(self, points, weights, Q, p, source=None):
        _check_q(Q)
        X = np.array(points, dtype=float)
        if X.ndim == 2:
            X = X.reshape(len(X), -1, Q.shape.m)
        if len(X) == 0:
            raise ParameterError("centroid body needs a nonempty sample")
        w = np.asarray(weights, dtype=float).ravel()
        if w.shape != (len(X),) or np.any(w < 0):
            raise ParameterError("one nonnegative weight per sample point")
        if p < 1:
            raise ParameterError(f"p must be at least 1, got {p}")
        self.points = X
        self.weights = w
        self.Q = Q
        self.p = float(p)
        self.shape = MatShape(X.shape[1], 1)
        self.source = source or {}
        self._fast = _q_args(Q)

    def power_support(self, v):
        V, single = bd.flat_points(self.shape, v)
        out = self._power(V)
        return float(out[0]) if single else out

    def _power(self, V):
        if self._fast is not None:
            qv, qb = self._fast
            return kernels.lp_sum_dirs(V, self.points, self.weights, qv, qb, self.p)
        Y = np.einsum("ai,bic->abc", V, self.points)
        return _hq_generic(self.Q, Y) ** self.p @ self.weights

    def _support(self, V):
        return self._power(V) ** (1.0 / self.p)

    def transported(self, T):
        """Gamma of T.L from the same sample, i.e. T.Gamma L."""
        T = np.array(T, dtype=float, ndmin=2)
        return CentroidBody(np.einsum("ai,bic->bac", T, self.points), self.weights, self.Q, self.p,
                            dict(self.source, transported=True))

    def bounding_radius(self):
        n = self.shape.n
        U = np.vstack([np.eye(n), -np.eye(n)])
        h = self._support(U)
        return float(np.sqrt(np.sum(np.maximum(h[:n], h[n:]) ** 2)))

    def to_json(self):
        return {"shape": self.shape.as_list(), "kind": "centroid_body", "p": self.p,
                "Q": self.Q.to_json(), "points": self.points.reshape(len(self.points), -1).tolist(),
                "weights": self.weights.tolist(), "source": self.source}

    @classmethod
    def from_json(cls, doc):
        return cls(doc["points"], doc["weights"], bd.from_json(doc["Q"]), doc["p"], doc.get("source"))


def _polar_weights(L, p, quad, replicate):
    """Weighted unit points representing the normalized volume of a star body L."""
    d = L.dim
    if replicate is None:
        T = quad.flat_nodes
        w = quad.weights.ravel() / quad.replicates
    else:
        T = quad.nodes[replicate]
        w = quad.weights[replicate]
    rho = 1.0 / np.asarray(L.gauge(T), dtype=float)
    if not np.all(np.isfinite(rho)) or np.any(rho <= 0):
        raise PolarUndefinedError("L must be a star body about the origin")
    vol = float(w @ rho ** d) / d
    return T, w * rho ** (d + p) / ((d + p) * vol), vol


def sample_body(L, N, seed, box=None):
    """N uniform points of L by rejection from a box."""
    d = L.dim
    if box is None:
        r = L.bounding_radius()
        lo, hi = np.full(d, -r), np.full(d, r)
    else:
        lo, hi = (np.full(d, -float(box)), np.full(d, float(box))) if np.isscalar(box) else \
            (np.asarray(box[0], float), np.asarray(box[1], float))
    g = make_rng(seed, "sample_body", d)
    out, got, tried = [], 0, 0
    while got < N:
        k = max(1024, 2 * (N - got))
        X = lo + (hi - lo) * g.random((k, d))
        X = X[L.contains(X)]
        tried += k
        out.append(X)
        got += len(X)
        if tried > 1000 * N + 10_000 and got < N:
            raise ParameterError("rejection sampling failed: body occupies too little of its box")
    return np.vstack(out)[:N]


def centroid_body(L, Q, p, N=None, seed=0, method="auto", quad=None, replicate=None, box=None):
    """Gamma_{Q,p} L from a frozen weighted sample of L.

    ``method`` is ``"polar"`` (radial quadrature of a star body, deterministic
    for product rules) or ``"sample"`` (N uniform points by rejection).
    ``"auto"`` samples when N is given and uses the polar form otherwise.
    """
    _check_q(Q, L.shape.m)
    if method == "auto":
        method = "sample" if N is not None else "polar"
    n, m = L.shape.n, L.shape.m
    if method == "polar":
        if quad is None:
            quad = sphere_quadrature(L.dim)
        T, w, vol = _polar_weights(L, p, quad, replicate)
        return CentroidBody(T.reshape(-1, n, m), w, Q, p, {"L": L.kind, "method": "polar", "vol": vol})
    if method == "sample":
        X = sample_body(L, int(N or 100_000), seed, box)
        return CentroidBody(X.reshape(-1, n, m), np.full(len(X), 1.0 / len(X)), Q, p,
                            {"L": L.kind, "method": "sample", "N": len(X), "seed": seed})
    raise ParameterError(f"unknown centroid method {method!r}")


def _rel_gap(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def duality_check(K, L, Q, p, quad, gamma="sample", N=200_000, seed=0, tol=DEFAULT):
    """Both sides of Vt_{-p,nm}(L, Pi^o K) = ((nm+p) vol(L)/m) V_{p,n}(K, Gamma L).

    The left side uses the radial quadrature ``quad``.  With ``gamma="sample"``
    the right side uses an independent uniform sample of L, so the two sides
    share no nodes; ``gamma="polar"`` builds Gamma L on the same nodes.
    """
    pb = projection_body(K, Q, p)
    n, m = K.shape.n, Q.shape.m
    d = n * m
    lhs = dual_mixed_volume(L, PolarProjectionBody(pb), p, quad)
    volL = polar_volume(L, quad)
    if gamma == "polar":
        G = centroid_body(L, Q, p, method="polar", quad=quad)
        V = float(pb.alphas @ G._power(pb.directions)) / n
        rhs_v = (d + p) * G.source["vol"] / m * V
        rhs_se = 0.0 if volL.stderr == 0 else rhs_v * volL.rel_stderr()
    else:
        X = sample_body(L, N, seed)
        # V_{p,n}(K, Gamma L) = (1/n) mean_j h_{Pi K}(x_j)^p
        vals = pb._power(X)
        V = float(vals.mean()) / n
        V_se = float(vals.std(ddof=1) / math.sqrt(len(vals))) / n
        rhs_v = (d + p) * volL.value / m * V
        rhs_se = rhs_v * math.hypot(V_se / V, volL.rel_stderr())
    se = math.hypot(lhs.stderr, rhs_se)
    gap = _rel_gap(lhs.value, rhs_v)
    case = CaseRecord.equality("duality", lhs.value, rhs_v, se, tol, seed=seed,
                               relative_gap=gap, gamma=gamma, n=n, m=m, p=p)
    return SuiteReport("duality", "dual mixed volume of L with the polar projection body equals the "
                       "scaled Lp mixed volume of K with the centroid body of L",
                       {"n": n, "m": m, "p": p, "gamma": gamma}, [case], seed)


# -- p = infinity -----------------------------------------------------------------

def _polar_vertices(K):
    if isinstance(K, VertexPolytope):
        if K.dim > 3:
            raise UnsupportedBodyError("polar vertices need n <= 3")
        u, b, _ = K.facets()
        if np.any(b <= 1e-12 * np.abs(b).max()):
            raise PolarUndefinedError("origin is not interior")
        return u / b[:, None]
    raise UnsupportedBodyError(f"no polar vertices for {K.kind}")


def pi_infinity(K, Q):
    """Pi_{Q,inf} K: h(x) = max over v in K^o of h_Q(v^t.x)."""
    _check_q(Q)
    n, m = K.shape.n, Q.shape.m
    shape = MatShape(n, m)
    if isinstance(K, Ball):
        if np.any(K.center):
            raise UnsupportedBodyError("pi_infinity of an off-center ball")
        s = 1.0 / K.radius
        if isinstance(Q, VertexPolytope):
            qv = Q.vertices

            def h(X):
                Y = np.einsum("jic,qc->jqi", X.reshape(len(X), n, m), qv)
                return s * np.max(np.linalg.norm(Y, axis=2), axis=1)
        elif isinstance(Q, Ball) and not np.any(Q.center):
            def h(X):
                return s * Q.radius * kernels.spectral_norm(X.reshape(len(X), n, m))
        else:
            raise UnsupportedBodyError("pi_infinity of a ball needs a polytope or ball Q")
        return SupportOracle(shape, h, name="pi_infinity")
    W = _polar_vertices(K)

    def h(X):
        Y = np.einsum("ki,jic->jkc", W, X.reshape(len(X), n, m))
        return np.max(_hq_generic(Q, Y), axis=1)
    return SupportOracle(shape, h, name="pi_infinity")


def gamma_infinity(L, Q):
    """Gamma_{Q,inf} L: h(xi) = max over x in L of h_Q(xi^t.x)."""
    _check_q(Q)
    m = Q.shape.m
    if isinstance(L, VertexPolytope):
        X = L.vertices
        n = L.shape.n
    else:
        X = np.asarray(L, dtype=float)
        if X.size == 0:
            raise ParameterError("empty set")
        n = X.shape[1] // m if X.ndim == 2 else X.shape[1]
    X3 = np.ascontiguousarray(X.reshape(len(X), n, m))
    fast = _q_args(Q)

    def h(V):
        if fast is not None:
            return kernels.max_pair(V, X3, fast[0], fast[1])
        Y = np.einsum("ai,bic->abc", V, X3)
        return np.max(_hq_generic(Q, Y), axis=1)
    return SupportOracle(MatShape(n, 1), h, name="gamma_infinity")


def opnorm_ball(E, F):
    """B_{E,F} in M[m,n]: unit ball of x -> max over v in E of ||x.v||_F."""
    n, m = E.dim, F.dim
    shape = MatShape(m, n)
    Fball = isinstance(F, Ball) and not np.any(F.center)
    FA = None if Fball else getattr(F, "normals", None)
    if not Fball and FA is None:
        raise UnsupportedBodyError("F must be a centered ball or a polytope with the origin interior")

    def image_gauge(Y):  # Y (..., m)
        if Fball:
            return np.linalg.norm(Y, axis=-1) / F.radius
        return np.maximum(np.max(Y @ FA.T, axis=-1), 0.0)

    if isinstance(E, VertexPolytope):
        Ev = np.ascontiguousarray(E.vertices)

        def g(X):
            X3 = X.reshape(len(X), m, n)
            if Fball:
                return kernels.max_image_norm(X3, Ev) / F.radius
            return np.max(image_gauge(np.einsum("jab,kb->jka", X3, Ev)), axis=1)
    elif isinstance(E, (Ball, EllipsoidImage)):
        if np.any(E.center):
            raise UnsupportedBodyError("E must be centered")
        M = E.radius * np.eye(n) if isinstance(E, Ball) else E.A

        def g(X):
            X3 = X.reshape(len(X), m, n) @ M
            if Fball:
                return kernels.spectral_norm(X3) / F.radius
            # max over unit v of max_i <a_i, x v> = max_i |x^t a_i|
            return np.max(np.linalg.norm(np.einsum("jab,ia->jib", X3, FA), axis=2), axis=1)
    else:
        raise UnsupportedBodyError(f"E must be a polytope or an ellipsoid, got {E.kind}")
    return GaugeOracle(shape, g, name="opnorm_ball")


def fixed_point_constant(n, m, p):
    """C_{n,m,p} = (m / (omega_n (nm + p)))^(1/p)."""
    return (m / (bd.unit_ball_volume(n) * (n * m + p))) ** (1.0 / p)

