"""Rank-one projections P with Q.P inside Q.

For a convex body Q in R^{1×m} containing the origin there is a direction
xi whose two support points x+(xi), x-(xi) are collinear with the origin.
Projecting along xi-perp onto that line maps Q into the chord [x-, x+].
The chord field

    f(xi) = the point of [x+(xi), x-(xi)] on xi-perp

is even and tangent to the sphere, so it has a zero.  Polytopes are
regularized first: support points are softmax averages of the vertices
(temperature ``tau``) pushed out by ``eps`` (the support points of Q + eps*B).
For polytopes the line found this way is then polished by a small linear
program that picks the best r for a given line, and by a local search over
the line itself.

P acts by right multiplication, q.P = <q, r> l with <r, l> = 1.
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.optimize import brentq, linprog, minimize

from .bodies import Ball, EllipsoidImage, VertexPolytope
from .errors import ParameterError, ProjectionNotFoundError, UnsupportedBodyError
from .seeding import rng as make_rng


@dataclass
class RankOneProjection:
    r: np.ndarray
    l: np.ndarray
    certificate: float = math.nan
    xi: np.ndarray | None = None
    eps: float = 0.0
    evaluations: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def matrix(self):
        return np.outer(self.r, self.l)

    def apply(self, q):
        q = np.atleast_2d(np.asarray(q, dtype=float))
        return np.outer(q @ self.r, self.l)

    def to_json(self):
        return {"r": self.r.tolist(), "l": self.l.tolist(), "certificate": self.certificate,
                "xi": None if self.xi is None else self.xi.tolist(), "eps": self.eps,
                "evaluations": self.evaluations, **self.extra}


def _points(Q):
    if Q.shape.n != 1:
        raise ParameterError("Q must be a body in R^(1 x m)")
    if isinstance(Q, VertexPolytope):
        return Q.vertices
    return None


def _diam(Q):
    V = _points(Q)
    if V is not None:
        return float(np.max(np.linalg.norm(V[:, None] - V[None], axis=2))) if len(V) > 1 else 0.0
    return 2 * Q.bounding_radius()


def _contains_origin(Q):
    V = _points(Q)
    if V is not None:
        if Q.dim == 1:
            return V.min() <= 1e-12 and V.max() >= -1e-12
        u, b, _ = Q.facets()
        return bool(np.all(b >= -1e-12 * max(1.0, np.abs(b).max())))
    return bool(Q.contains(np.zeros(Q.dim)))


class ChordField:
    """f(xi) for a polytope, ball or ellipsoid Q; batched over rows of xi."""

    def __init__(self, Q, eps=None, tau=None):
        if not _contains_origin(Q):
            raise ParameterError("the chord field needs a body containing the origin")
        self.Q = Q
        d = _diam(Q)
        self.eps = 1e-4 * d if eps is None else float(eps)
        self.tau = 1e-4 * d if tau is None else float(tau)
        self.V = _points(Q)
        if self.V is None and not isinstance(Q, (Ball, EllipsoidImage)):
            raise UnsupportedBodyError(f"chord fields need a polytope, ball or ellipsoid, got {Q.kind}")
        self.calls = 0

    def support_point(self, Xi):
        Xi = np.atleast_2d(Xi)
        Q = self.Q
        if self.V is not None:
            s = Xi @ self.V.T
            z = (s - s.max(axis=1, keepdims=True)) / max(self.tau, 1e-300)
            w = np.exp(z)
            w /= w.sum(axis=1, keepdims=True)
            return w @ self.V + self.eps * Xi
        if isinstance(Q, Ball):
            return Q.center + (Q.radius + self.eps) * Xi
        Y = Xi @ Q.A
        return Q.center + (Y / np.linalg.norm(Y, axis=1, keepdims=True)) @ Q.A.T + self.eps * Xi

    def ends(self, Xi):
        return self.support_point(Xi), self.support_point(-np.atleast_2d(Xi))

    def __call__(self, Xi):
        Xi = np.atleast_2d(np.asarray(Xi, dtype=float))
        self.calls += len(Xi)
        xp, xm = self.ends(Xi)
        a = np.einsum("ij,ij->i", xp, Xi)
        b = np.einsum("ij,ij->i", xm, Xi)
        lam = a / np.where(a - b > 0, a - b, 1.0)
        return xp + lam[:, None] * (xm - xp)


def chord_field(Q, xi, eps=None, tau=None):
    """f(xi), the point where the chord [x+(xi), x-(xi)] crosses xi-perp."""
    xi = np.asarray(xi, dtype=float).ravel()
    if abs(np.linalg.norm(xi) - 1) > 1e-9:
        raise ParameterError("xi must be a unit vector")
    return ChordField(Q, eps, tau)(xi[None])[0]


# -- certificates ---------------------------------------------------------------------

def _facet_gauge(u, b, X):
    """Gauge of {x : u.x <= b} (b >= 0); inf outside the cone of facets through the origin."""
    scale = max(1.0, float(np.abs(b).max()))
    pos = b > 1e-12 * scale
    s = X @ u.T
    g = np.max(s[:, pos] / b[pos], axis=1) if pos.any() else np.zeros(len(X))
    if (~pos).any():
        bad = np.max(s[:, ~pos], axis=1) > 1e-12 * np.maximum(np.linalg.norm(X, axis=1), 1e-300)
        g = np.where(bad, np.inf, g)
    return np.maximum(g, 0.0)


def certificate(Q, proj, probes=1000, seed=0):
    """max over Q's vertices (or boundary probes) of gauge_Q(q.P) - 1."""
    V = _points(Q)
    if V is not None:
        if Q.dim == 1:
            lo, hi = float(V.min()), float(V.max())
            img = proj.apply(V)[:, 0]
            return float(max(np.max(img / hi) if hi > 0 else (np.inf if img.max() > 0 else 0.0),
                             np.max(img / lo) if lo < 0 else (np.inf if img.min() < 0 else 0.0)) - 1.0)
        u, b, _ = Q.facets()
        return float(np.max(_facet_gauge(u, b, proj.apply(V)))) - 1.0
    g = make_rng(seed, "certificate", Q.dim)
    U = g.standard_normal((probes, Q.dim))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    B = U / Q.gauge(U)[:, None]
    return float(np.max(Q.gauge(proj.apply(B)))) - 1.0


def _from_line(Q, xi, lhat):
    """Projection with kernel xi-perp onto span(lhat), scaled so Q meets the line in [-beta, 1] * l."""
    lhat = lhat / np.linalg.norm(lhat)
    l = lhat / max(float(Q.gauge(lhat[None])[0]) if _points(Q) is None else _line_reach(Q, lhat), 1e-300)
    r = xi / float(xi @ l)
    return r, l


def _line_reach(Q, lhat):
    u, b, _ = Q.facets()
    return float(_facet_gauge(u, b, lhat[None])[0])


def _lp_polish(Q, lhat):
    """min t over r with <l, r> = 1 and <q, r> in [-beta - t, 1 + t] for the vertices q."""
    V = _points(Q)
    m = Q.dim
    lhat = lhat / np.linalg.norm(lhat)
    u, b, _ = Q.facets()
    ga = float(_facet_gauge(u, b, lhat[None])[0])
    gb = float(_facet_gauge(u, b, -lhat[None])[0])
    if not np.isfinite(ga) or ga <= 0:
        return math.inf, None, None
    l = lhat / ga
    beta = 0.0 if not np.isfinite(gb) else (ga / gb if gb > 0 else math.inf)
    if not np.isfinite(beta):
        return math.inf, None, None
    # variables (r, t); minimize t
    c = np.r_[np.zeros(m), 1.0]
    A_ub = np.vstack([np.c_[V, -np.ones(len(V))], np.c_[-V, -np.ones(len(V))]])
    b_ub = np.r_[np.ones(len(V)), np.full(len(V), beta)]
    A_eq = np.r_[l, 0.0][None]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                  bounds=[(None, None)] * (m + 1), method="highs")
    if res.status != 0:
        return math.inf, None, None
    return float(res.x[-1]), res.x[:m], l


# -- searches ------------------------------------------------------------------------

def _angle_dir(th):
    return np.array([math.cos(th), math.sin(th)])


def _sphere_dir(a):
    th, ph = a
    return np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])


def _zero_2d(F, grid=256):
    """Zero of g(theta) = <f(xi), rot90(xi)> on [0, pi] (g(pi) = -g(0))."""
    th = np.linspace(0, np.pi, grid + 1)
    Xi = np.column_stack([np.cos(th), np.sin(th)])
    f = F(Xi)
    gv = f[:, 1] * Xi[:, 0] - f[:, 0] * Xi[:, 1]
    if np.any(gv == 0):
        return float(th[np.nonzero(gv == 0)[0][0]])
    k = np.nonzero(np.sign(gv[:-1]) != np.sign(gv[1:]))[0]
    if len(k) == 0:
        raise ProjectionNotFoundError("no sign change of the chord field on the half circle")
    # the smallest |f| among the sign changes is the genuine zero rather than a jump
    best = None
    for i in k:
        def g(t):
            x = _angle_dir(t)
            y = F(x[None])[0]
            return y[1] * x[0] - y[0] * x[1]
        t0 = brentq(g, th[i], th[i + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps)
        nf = float(np.linalg.norm(F(_angle_dir(t0)[None])[0]))
        if best is None or nf < best[1]:
            best = (t0, nf)
    return best[0]


def _zero_3d(F, grid=64):
    th = np.arccos(1 - 2 * (np.arange(grid) + 0.5) / grid)
    ph = np.pi * (np.arange(grid) + 0.5) / grid  # f is even: a half sphere suffices
    TH, PH = np.meshgrid(th, ph, indexing="ij")
    A = np.column_stack([TH.ravel(), PH.ravel()])
    Xi = np.column_stack([np.sin(A[:, 0]) * np.cos(A[:, 1]), np.sin(A[:, 0]) * np.sin(A[:, 1]), np.cos(A[:, 0])])
    nf = np.linalg.norm(F(Xi), axis=1)
    order = np.argsort(nf, kind="stable")[:6]
    best = None
    for i in order:
        res = minimize(lambda a: float(np.linalg.norm(F(_sphere_dir(a)[None])[0])), A[i],
                       method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
        if best is None or res.fun < best.fun:
            best = res
    return _sphere_dir(best.x)


def _polish_polytope(Q, F, xi0, budget):
    """Best line near the chord-field zero and among the vertex directions."""
    m = Q.dim
    V = _points(Q)
    xp, xm = F.ends(xi0[None])
    cands = []
    for c in (xp[0], -xm[0]):
        if np.linalg.norm(c) > 1e-12:
            cands.append(c / np.linalg.norm(c))
    for v in V:
        if np.linalg.norm(v) > 1e-12:
            cands.append(v / np.linalg.norm(v))
    results = []
    for lh in cands:
        t, r, l = _lp_polish(Q, lh)
        results.append((t, lh, r, l))
    results.sort(key=lambda z: z[0])
    best = results[0]
    if best[0] <= 0 or m == 1:
        return best
    # local search over the line direction from the most promising starts
    calls = 0
    for t0, lh0, _, _ in results[:4]:
        if calls > budget:
            break
        if m == 2:
            a0 = np.array([math.atan2(lh0[1], lh0[0])])
            to_dir = lambda a: _angle_dir(a[0])
        else:
            a0 = np.array([math.acos(np.clip(lh0[2], -1, 1)), math.atan2(lh0[1], lh0[0])])
            to_dir = _sphere_dir

        def obj(a):
            return _lp_polish(Q, to_dir(a))[0]
        res = minimize(obj, a0, method="Nelder-Mead",
                       options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 400})
        calls += res.nfev
        if res.fun < best[0]:
            t, r, l = _lp_polish(Q, to_dir(res.x))
            best = (t, to_dir(res.x), r, l)
        if best[0] <= 0:
            break
    return best


def find_projection(Q, eps=None, tau=None, tol=1e-6, max_shrink=6, budget=100_000):
    """Rank-one P = r^t.l with Q.P inside Q, with its certificate.

    ``eps`` and ``tau`` default to 1e-4 of the diameter and are divided by
    10 whenever the certificate exceeds ``tol``.
    """
    m = Q.dim
    if Q.shape.n != 1:
        raise ParameterError("Q must be a body in R^(1 x m)")
    if not _contains_origin(Q):
        raise ParameterError("Q must contain the origin")
    if m == 1:
        P = RankOneProjection(np.array([1.0]), np.array([1.0]), 0.0, np.array([1.0]))
        P.certificate = certificate(Q, P)
        return P
    if m > 3:
        raise UnsupportedBodyError("projections are searched for m <= 3")
    d = _diam(Q)
    eps = 1e-4 * d if eps is None else eps
    tau = 1e-4 * d if tau is None else tau
    history = []
    evals = 0
    for _ in range(max_shrink + 1):
        F = ChordField(Q, eps, tau)
        xi = _angle_dir(_zero_2d(F)) if m == 2 else _zero_3d(F)
        fnorm = float(np.linalg.norm(F(xi[None])[0]))
        if _points(Q) is not None:
            t, lh, r, l = _polish_polytope(Q, F, xi, budget)
            if r is None:
                xp, _ = F.ends(xi[None])
                r, l = _from_line(Q, xi, xp[0])
        else:
            xp, xm = F.ends(xi[None])
            lh = xp[0] if np.linalg.norm(xp[0]) > np.linalg.norm(xm[0]) else -xm[0]
            r, l = _from_line(Q, xi, lh)
        evals += F.calls
        P = RankOneProjection(np.asarray(r, float), np.asarray(l, float), xi=xi, eps=eps, evaluations=evals,
                              extra={"field_norm": fnorm, "tau": tau})
        P.certificate = certificate(Q, P)
        history.append((eps, P.certificate))
        if P.certificate <= tol:
            P.extra["history"] = history
            return P
        if evals > budget:
            break
        eps /= 10
        tau /= 10
    raise ProjectionNotFoundError(
        f"no projection certified below {tol:g} (last certificate {history[-1][1]:.3g}); "
        "the search resolution was exhausted, which does not contradict existence")


def geodesic_sphere(level=1):
    """Vertices of a subdivided icosahedron on the unit sphere."""
    t = (1 + 5 ** 0.5) / 2
    V = np.array([[-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0], [0, -1, t], [0, 1, t],
                  [0, -1, -t], [0, 1, -t], [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1]], float)
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    from scipy.spatial import ConvexHull
    for _ in range(level):
        F = ConvexHull(V).simplices
        E = np.unique(np.sort(np.vstack([F[:, [0, 1]], F[:, [1, 2]], F[:, [0, 2]]]), axis=1), axis=0)
        M = V[E[:, 0]] + V[E[:, 1]]
        V = np.vstack([V, M / np.linalg.norm(M, axis=1, keepdims=True)])
    return V


def smoothed_random_body(m, k=30, eps=0.05, seed=0, level=1):
    """Hull of k Gaussian points plus eps times a polytope sphere, as a vertex polytope in R^(1 x m)."""
    from . import hull
    from .bodies import MatShape
    g = make_rng(seed, "smoothed_random_body", m, k)
    P = g.standard_normal((k, m))
    P -= P.mean(axis=0)
    S = geodesic_sphere(level) if m == 3 else np.column_stack(
        [np.cos(2 * np.pi * np.arange(24) / 24), np.sin(2 * np.pi * np.arange(24) / 24)])
    return VertexPolytope(MatShape(1, m), hull.minkowski_sum(hull.extreme_points(P), eps * S))
