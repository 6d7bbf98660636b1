"""Steiner symmetrization in R^n and its fiberwise version on M[n,m].

Classical: the chord of K along v over each point of v-perp is re-centered
on v-perp.  The chord length is concave and piecewise linear over the
arrangement cut out by the projected edges of K, so the hull of the
re-centered chord endpoints over the arrangement vertices is exactly the
symmetral (n = 2 and n = 3).

Fiberwise (m-th order): the fiber F_y = {t in R^m : y + v.t in L} over a
point y with v^t.y = 0 is replaced by its central symmetral (F_y - F_y)/2.
"""
import math

import numpy as np
from scipy.spatial import ConvexHull

from . import hull, kernels
from .bodies import (Ball, Body, EllipsoidImage, HPolytope, MatShape, Segment, VertexPolytope)
from .errors import ParameterError, SamplerError, UnsupportedBodyError
from .measure import VolumeEstimate
from .operators import projection_body
from .report import CaseRecord, SuiteReport
from .seeding import rng as make_rng
from .tolerance import DEFAULT


def _unit(v, n):
    v = np.asarray(v, dtype=float).ravel()
    if v.size != n:
        raise ParameterError(f"direction must have {n} entries")
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise ParameterError("direction must be a unit vector")
    return v / np.linalg.norm(v)


# -- classical --------------------------------------------------------------------

def _chord_bounds(u, b, Y, v):
    """[lo, hi] with Y + tau*v in {x : u.x <= b} for each row of Y."""
    uv = u @ v
    rhs = b[None, :] - Y @ u.T
    up, dn = uv > 1e-14, uv < -1e-14
    hi = np.min(rhs[:, up] / uv[up], axis=1)
    lo = np.max(rhs[:, dn] / uv[dn], axis=1)
    # facets parallel to v cut off base points outside the projection
    par = ~(up | dn)
    if np.any(par):
        out = np.any(rhs[:, par] < -1e-12 * max(1.0, float(np.abs(b).max())), axis=1)
        hi = np.where(out, lo, hi)
    return lo, hi


def _edge_crossings(P2):
    """Pairwise intersection points of the segments P2[:, 0] -- P2[:, 1] in the plane."""
    a, b = P2[:, 0], P2[:, 1]
    d = b - a
    out = []
    for i in range(len(a)):
        den = d[i, 0] * d[:, 1] - d[i, 1] * d[:, 0]
        ok = np.abs(den) > 1e-14
        w = a - a[i]
        with np.errstate(divide="ignore", invalid="ignore"):
            s = (w[:, 0] * d[:, 1] - w[:, 1] * d[:, 0]) / den
            t = (w[:, 0] * d[i, 1] - w[:, 1] * d[i, 0]) / den
        ok &= (s > 0) & (s < 1) & (t > 0) & (t < 1)
        if np.any(ok):
            out.append(a[i] + s[ok, None] * d[i])
    return np.vstack(out) if out else np.zeros((0, 2))


def _perp_basis(v):
    n = len(v)
    _, _, Vt = np.linalg.svd(v[None, :])
    return Vt[1:n]  # rows span v-perp


def steiner_classical(K, v):
    """S_v K for a polytope (n = 2 or 3) or a ball in R^n."""
    n = K.shape.n
    if K.shape.m != 1:
        raise UnsupportedBodyError("classical Steiner symmetrization acts on bodies in R^n")
    v = _unit(v, n)
    if isinstance(K, Ball):
        return Ball(K.shape, K.radius, K.center - (K.center @ v) * v)
    if not isinstance(K, VertexPolytope):
        raise UnsupportedBodyError(f"Steiner symmetrization needs a polytope or a ball, got {K.kind}")
    if n == 1:
        L = K.vertices.max() - K.vertices.min()
        return Segment(K.shape, [-L / 2], [L / 2])
    if n > 3:
        raise UnsupportedBodyError("Steiner symmetrization is implemented for n <= 3")
    V = K.vertices
    u, b, _ = K.facets()
    W = _perp_basis(v)
    base = V @ W.T
    if n == 3:
        simp = ConvexHull(V).simplices
        E = np.vstack([simp[:, [0, 1]], simp[:, [1, 2]], simp[:, [0, 2]]])
        E = np.unique(np.sort(E, axis=1), axis=0)
        base = np.vstack([base, _edge_crossings(base[E])])
    Y = base @ W
    lo, hi = _chord_bounds(u, b, Y, v)
    half = np.maximum(hi - lo, 0.0) / 2
    P = np.vstack([Y + half[:, None] * v, Y - half[:, None] * v])
    return VertexPolytope(K.shape, hull.extreme_points(P))


def reflect(x, v):
    """Reflection of the rows of x across v-perp."""
    x = np.asarray(x, dtype=float)
    return x - 2 * np.outer(x @ v, v)


# -- symmetrization sequences in the plane ----------------------------------------

def _polygon_ccw(P):
    return hull.polygon_order(hull.extreme_points(P))


def prune_polygon(P, cap):
    """Drop the vertices of least triangle area until at most ``cap`` remain."""
    P = np.array(P, dtype=float)
    while len(P) > cap:
        a, b, c = np.roll(P, 1, axis=0), P, np.roll(P, -1, axis=0)
        tri = np.abs((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))
        k = len(P) - cap
        # dropping non-adjacent vertices at once keeps the pass cheap
        order = np.argsort(tri, kind="stable")
        drop, blocked = [], set()
        for i in order:
            if len(drop) == k:
                break
            if i in blocked:
                continue
            drop.append(i)
            blocked.update({i, (i - 1) % len(P), (i + 1) % len(P)})
        P = np.delete(P, drop, axis=0)
    return P


def hausdorff_to_disk(P, r):
    """Hausdorff distance between the polygon conv(P) and the centered disk of radius r."""
    P = _polygon_ccw(P)
    far = float(np.max(np.linalg.norm(P, axis=1)))
    a, b = P, np.roll(P, -1, axis=0)
    e = b - a
    nrm = np.column_stack([e[:, 1], -e[:, 0]]) / np.linalg.norm(e, axis=1)[:, None]
    off = np.einsum("ij,ij->i", nrm, a)
    if np.all(off > 0):
        near = float(off.min())  # min of h_P over the circle
    else:  # origin outside: min h_P is minus the distance to P
        t = np.clip(-np.einsum("ij,ij->i", a, e) / np.einsum("ij,ij->i", e, e), 0, 1)
        near = -float(np.min(np.linalg.norm(a + t[:, None] * e, axis=1)))
    return max(far - r, r - near)


def steiner_sequence(K, rounds=200, seed=0, directions=None, vertex_cap=256, threshold=1e-2):
    """Repeated Steiner symmetrization of a polygon along random directions.

    Returns ``(body, trace)`` where ``trace`` has one row per step:
    (Hausdorff distance to the centered disk of equal area, area).  The
    vertex count of iterated symmetrals doubles each round, so polygons
    above ``vertex_cap`` vertices are pruned and rescaled about the origin
    back to the original area.
    """
    if K.shape.n != 2 or K.shape.m != 1:
        raise UnsupportedBodyError("Steiner sequences are implemented in the plane")
    if directions is None:
        ang = make_rng(seed, "steiner_sequence").uniform(0, np.pi, rounds)
        directions = np.column_stack([np.cos(ang), np.sin(ang)])
    directions = np.asarray(directions, dtype=float)
    if isinstance(K, Ball):
        A0 = K.volume()
        cur = K
        trace = []
        for v in directions:
            cur = steiner_classical(cur, v)
            trace.append((float(np.linalg.norm(cur.center)), A0))
        return cur, _Trace(np.array(trace).reshape(-1, 2), 2 * K.radius, threshold)
    A0 = K.volume()
    r = math.sqrt(A0 / math.pi)
    cur = K
    trace = []
    for v in directions:
        cur = steiner_classical(cur, v)
        if len(cur.vertices) > vertex_cap:
            P = prune_polygon(_polygon_ccw(cur.vertices), vertex_cap)
            P *= math.sqrt(A0 / abs(hull.polygon_area(P)))
            cur = VertexPolytope(K.shape, P)
        trace.append((hausdorff_to_disk(cur.vertices, r), cur.volume()))
    diam = float(np.max(np.linalg.norm(K.vertices[:, None] - K.vertices[None], axis=2)))
    return cur, _Trace(np.array(trace).reshape(-1, 2), diam, threshold)


class _Trace:
    """Distances and areas along a symmetrization sequence."""

    def __init__(self, rows, diameter, threshold):
        self.distance = rows[:, 0]
        self.area = rows[:, 1]
        self.diameter = diameter
        self.threshold = threshold

    @property
    def reached(self):
        """First step whose distance is below threshold * diameter, or None."""
        hit = np.nonzero(self.distance <= self.threshold * self.diameter)[0]
        return int(hit[0]) if len(hit) else None

    def to_json(self):
        return {"distance": self.distance.tolist(), "area": self.area.tolist(),
                "diameter": self.diameter, "threshold": self.threshold, "reached": self.reached}


# -- fiberwise symmetral on M[n,m] ---------------------------------------------------

def _vop(v, m):
    """Matrix of t -> v.t (flat coordinates), shape (n*m, m)."""
    return np.kron(v[:, None], np.eye(m))


class SteinerSymmetral(Body):
    """Membership oracle of the fiberwise symmetral of L along v.

    Fibers are handled exactly for ellipsoids and H-polytopes; any other
    convex body with a membership test gets its fibers by radial bisection
    from a sampled interior point (an inner approximation).
    """

    kind = "steiner_symmetral"

    def __init__(self, L, v, rays=64, seed=0):
        self.L = L
        self.shape = L.shape
        n, m = self.shape.n, self.shape.m
        if m > 2:
            raise UnsupportedBodyError("fiberwise symmetrals are implemented for m <= 2")
        self.v = _unit(v, n)
        self.Vop = _vop(self.v, m)
        self.rays = rays
        self.seed = seed
        self.radius = L.bounding_radius()

    def bounding_radius(self):
        return self.radius

    def split(self, X):
        """(y, r) with x = y + v.r and v^t.y = 0."""
        n, m = self.shape.n, self.shape.m
        X3 = X.reshape(len(X), n, m)
        r = np.einsum("i,jic->jc", self.v, X3)
        return X - r @ self.Vop.T, r

    def _contains(self, X, tol):
        member, _, _ = self.fibers(X, tol)
        return member

    def fibers(self, X, tol=1e-9):
        """(member, |F_y|, |(F_y - F_y)/2|) for the base points of the rows of X."""
        Y, R = self.split(X)
        L = self.L
        if isinstance(L, (Ball, EllipsoidImage)):
            return self._ellipsoid(Y, R, tol)
        A = L.normals if isinstance(L, (VertexPolytope, HPolytope)) else None
        if A is not None:
            return self._polytope(np.asarray(A), Y, R, tol)
        return self._generic(Y, R, tol)

    def _ellipsoid(self, Y, R, tol):
        L = self.L
        M = (L.A if isinstance(L, EllipsoidImage) else L.radius * np.eye(L.dim))
        Minv = np.linalg.inv(M)
        B = Minv @ self.Vop
        Z = (Y - L.center) @ Minv.T
        G = B.T @ B
        t0 = -np.linalg.solve(G, B.T @ Z.T).T
        Zp = Z + t0 @ B.T
        rho2 = 1.0 - np.einsum("ij,ij->i", Zp, Zp)
        MR = R @ B.T
        q = np.einsum("ij,ij->i", MR, MR)
        member = (rho2 >= 0) & (q <= np.maximum(rho2, 0) * (1 + tol) + tol)
        m = self.shape.m
        ar = np.where(rho2 > 0, np.maximum(rho2, 0) ** (m / 2), 0.0) * _unit_ball_vol(m) / math.sqrt(
            np.linalg.det(G))
        return member, ar, ar.copy()

    def _polytope(self, A, Y, R, tol):
        C = A @ self.Vop
        D = 1.0 - Y @ A.T
        if self.shape.m == 1:
            c = C[:, 0]
            up, dn = c > 1e-14, c < -1e-14
            hi = np.min(D[:, up] / c[up], axis=1) if up.any() else np.full(len(Y), np.inf)
            lo = np.max(D[:, dn] / c[dn], axis=1) if dn.any() else np.full(len(Y), -np.inf)
            par = ~(up | dn)
            ok = np.all(D[:, par] >= -tol, axis=1) if par.any() else np.ones(len(Y), bool)
            w = np.where(ok, np.maximum(hi - lo, 0.0), 0.0)
            member = ok & (hi >= lo) & (2 * np.abs(R[:, 0]) <= w * (1 + tol) + tol)
            return member, w, w.copy()
        member, area, sym = kernels.fiber_polygons(C, D, R, 1.01 * self.radius + 1e-9)
        return member, area, sym

    def _generic(self, Y, R, tol):
        m = self.shape.m
        N = len(Y)
        member = np.zeros(N, bool)
        area = np.zeros(N)
        sym = np.zeros(N)
        g = make_rng(self.seed, "fiber_generic", m)
        rad = self.radius
        if m == 1:
            dirs = np.array([[1.0], [-1.0]])
        else:
            a = 2 * np.pi * np.arange(self.rays) / self.rays
            dirs = np.column_stack([np.cos(a), np.sin(a)])
        for j in range(N):
            y = Y[j]
            T = g.uniform(-rad, rad, (256, m))
            inside = self.L.contains(y + T @ self.Vop.T)
            if not inside.any():
                continue
            c = T[inside].mean(axis=0)
            if not self.L.contains(y + c @ self.Vop.T):
                c = T[inside][0]
            lo, hi = np.zeros(len(dirs)), np.full(len(dirs), 2 * rad)
            for _ in range(50):
                mid = 0.5 * (lo + hi)
                ok = self.L.contains(y + (c + mid[:, None] * dirs) @ self.Vop.T)
                lo = np.where(ok, mid, lo)
                hi = np.where(ok, hi, mid)
            P = c + lo[:, None] * dirs
            if m == 1:
                w = float(P.max() - P.min())
                area[j] = sym[j] = w
                member[j] = 2 * abs(R[j, 0]) <= w * (1 + tol) + tol
                continue
            Pk = P - c
            # fiber polygon as halfplanes, then the exact symmetral test
            u, b, _ = hull.facets(Pk)
            mm, ar, sa = kernels.fiber_polygons(u, (b + u @ c)[None], R[j:j + 1], 2 * rad)
            member[j], area[j], sym[j] = mm[0], ar[0], sa[0]
        return member, area, sym


def _unit_ball_vol(k):
    return math.pi ** (k / 2) / math.gamma(k / 2 + 1)


def steiner_mth(L, v, **kw):
    """Fiberwise symmetral of L in M[n,m] (m <= 2) along the unit vector v of R^n."""
    return SteinerSymmetral(L, v, **kw)


def symmetral_volume_gain(L, v, N=200_000, seed=0):
    """vol(S_v L) - vol(L) by Monte Carlo with common points, plus both volumes.

    Returns ``(gain, vol_L, vol_S)`` as VolumeEstimates; the gain's standard
    error comes from the paired membership indicators.
    """
    S = steiner_mth(L, v)
    d = L.dim
    R = S.bounding_radius()
    g = make_rng(seed, "symmetral_volume", d)
    box = (2 * R) ** d
    inL = np.zeros(N, bool)
    inS = np.zeros(N, bool)
    step = 1 << 15
    for s in range(0, N, step):
        X = g.uniform(-R, R, (min(step, N - s), d))
        inL[s:s + len(X)] = L.contains(X)
        inS[s:s + len(X)] = S.contains(X)
    diff = inS.astype(float) - inL.astype(float)

    def est(z):
        return VolumeEstimate(box * float(z.mean()), box * float(z.std(ddof=1)) / math.sqrt(N), "mc-membership")
    return est(diff), est(inL.astype(float)), est(inS.astype(float))


# -- inclusion probes ----------------------------------------------------------------

def _bisect_line(gauge, base, w, hi, iters=100, rtol=1e-13):
    """Largest lam in [0, hi] with gauge(base + lam*w) <= 1 (gauge convex, gauge(base) <= 1).

    Illinois-type false position on the bracket [0, hi]; the returned value
    is always the feasible end of the bracket.
    """
    N = len(base)
    a = np.zeros(N)
    b = np.full(N, float(hi))
    fa = gauge(base) - 1.0
    fb = gauge(base + b[:, None] * w) - 1.0
    side = np.zeros(N, dtype=int)
    for _ in range(iters):
        live = ((b - a) > rtol * hi) & ~((a > 0) & (fa > -1e-15))
        if not live.any():
            break
        den = np.where(fb - fa > 0, fb - fa, 1.0)
        c = np.where(fb - fa > 0, b - fb * (b - a) / den, 0.5 * (a + b))
        c = np.clip(c, a + 1e-3 * (b - a), b - 1e-3 * (b - a))
        idx = np.nonzero(live)[0]
        fc = np.full(N, np.nan)
        fc[idx] = gauge(base[idx] + c[idx, None] * w[idx]) - 1.0
        low = live & (fc <= 0)
        high = live & (fc > 0)
        fb = np.where(low & (side == -1), 0.5 * fb, fb)
        fa = np.where(high & (side == 1), 0.5 * fa, fa)
        a = np.where(low, c, a)
        fa = np.where(low, fc, fa)
        b = np.where(high, c, b)
        fb = np.where(high, fc, fb)
        side = np.where(low, -1, np.where(high, 1, side))
    return a


def _uniform_in(gauge, d, R, N, g, what):
    out, got, tried = [], 0, 0
    while got < N:
        k = max(4096, 2 * (N - got))
        X = g.uniform(-R, R, (k, d))
        X = X[gauge(X) <= 1.0]
        tried += k
        got += len(X)
        out.append(X)
        if tried >= 100_000 and got / tried < 1e-4:
            raise SamplerError(f"rejection sampling of {what}: efficiency {got / tried:.2e} below 1e-4")
    return np.vstack(out)[:N], N / tried


def _unit_rows(g, N, m):
    W = g.standard_normal((N, m))
    return W / np.linalg.norm(W, axis=1, keepdims=True)


def inclusion_check(K, Q, p, v, N=100_000, seed=0, r=None, l=None, tol=DEFAULT,
                    boundary_fraction=0.25, ball_size=512):
    """Probe S_v(Pi^o K) inside Pi^o(S_v K), and optionally the permutation-lemma inclusion.

    Probe pairs x1 = y + v.t and x2 = y + v.s lie in Pi^o K; t is uniform
    through x1, s sits on a random chord of the fiber through t.  A fraction
    of the pairs are the chord endpoints themselves, which probes the
    boundary where the inclusion is tight.  With a rank-one projection
    r^t.l for Q, pairs with t - s parallel to r probe
    J_r^{-1} S_v Pi^o K inside S_v Pi^o_{Q'} K where Q' = [-h_Q(-r), h_Q(r)].
    """
    n, m = K.shape.n, Q.shape.m
    v = _unit(v, n)
    g = make_rng(seed, "inclusion", n, m)
    pb = projection_body(K, Q, p, ball_size if isinstance(K, Ball) else None)
    SK = steiner_classical(K, v)
    ps = projection_body(SK, Q, p, ball_size if isinstance(SK, Ball) else None)
    gK, gS = pb._support, ps._support
    d = n * m
    R = 1.0 / pb.min_support()
    Vop = _vop(v, m)
    X1, eff = _uniform_in(gK, d, R, N, g, "the polar projection body")
    t = np.einsum("i,jic->jc", v, X1.reshape(N, n, m))
    Y = X1 - t @ Vop.T
    W = _unit_rows(g, N, m)
    up = _bisect_line(gK, X1, W @ Vop.T, 2 * R)
    dn = _bisect_line(gK, X1, -W @ Vop.T, 2 * R)
    edge = g.random(N) < boundary_fraction
    lam = np.where(edge, 0.0, g.uniform(-dn, up))
    t1 = np.where(edge[:, None], t + up[:, None] * W, t)
    s1 = np.where(edge[:, None], t - dn[:, None] * W, t + lam[:, None] * W)
    mid = Y + (0.5 * (t1 - s1)) @ Vop.T
    vals = gS(mid)
    worst = float(vals.max())
    viol = int(np.count_nonzero(vals > 1.0 + tol.probe))
    cases = [CaseRecord("inclusion", worst, 1.0, worst - 1.0, 0.0, viol == 0, seed,
                        {"probes": N, "violations": viol, "max_gauge": worst, "efficiency": eff,
                         "boundary_probes": int(edge.sum())})]
    if r is not None:
        cases.append(_permutation_probe(K, SK, Q, p, v, np.ravel(r), np.ravel(l), N, g, gK, R, tol, seed,
                                        ball_size))
    return SuiteReport("inclusion", "the fiberwise symmetral of the polar projection body lies inside "
                       "the polar projection body of the Steiner symmetral",
                       {"n": n, "m": m, "p": p, "N": N, "v": v.tolist()}, cases, seed)


def _permutation_probe(K, SK, Q, p, v, r, l, N, g, gK, R, tol, seed, ball_size):
    n, m = K.shape.n, Q.shape.m
    a1 = float(Q.support(r))
    a2 = float(Q.support(-r))
    Qs = Segment(MatShape(1, 1), [-a2], [a1])
    p1 = projection_body(K, Qs, p, ball_size if isinstance(K, Ball) else None)
    g1 = p1._support
    W = _perp_basis(v)
    # sample (u, t) with u in v-perp and u.r + v.t in Pi^o K
    k = W.shape[0]
    Vop = _vop(v, m)

    def emb(U, T):
        return np.einsum("ji,c->jic", U @ W, r).reshape(len(U), -1) + T @ Vop.T

    rs = R / max(np.linalg.norm(r), 1e-300)
    out, got, tried = [], 0, 0
    while got < N:
        Z = g.uniform(-1, 1, (max(4096, 2 * (N - got)), k + m)) * np.r_[np.full(k, rs), np.full(m, R)]
        Z = Z[gK(emb(Z[:, :k], Z[:, k:])) <= 1.0]
        tried += max(4096, 2 * (N - got))
        got += len(Z)
        out.append(Z)
        if tried >= 100_000 and got / tried < 1e-4:
            raise SamplerError("permutation probes: rejection efficiency below 1e-4")
    Z = np.vstack(out)[:N]
    U, T = Z[:, :k], Z[:, k:]
    base = emb(U, T)
    rdir = np.tile(r / np.linalg.norm(r), (N, 1)) @ Vop.T
    up = _bisect_line(gK, base, rdir, 2 * R)
    dn = _bisect_line(gK, base, -rdir, 2 * R)
    edge = g.random(N) < 0.25
    rh = r / np.linalg.norm(r)
    mu = g.uniform(-dn, up)
    t1 = T + np.where(edge, up, 0.0)[:, None] * rh
    s1 = T + np.where(edge, -dn, mu)[:, None] * rh
    al, be = t1 @ l, s1 @ l
    tau = 0.5 * (al - be)
    # u + alpha v lies in Pi^o_{Q'} K; the fiber through it gives the symmetral's half-length
    pts = U @ W + al[:, None] * v
    inside = g1(pts) <= 1.0 + tol.probe
    reach = 2.02 / p1.min_support()
    hi = _bisect_line(g1, pts, np.tile(v, (N, 1)), reach)
    lo = _bisect_line(g1, pts, np.tile(-v, (N, 1)), reach)
    half = np.where(inside, 0.5 * (hi + lo), 0.0)
    ratio = np.abs(tau) / np.maximum(half, 1e-300)
    worst = float(ratio.max())
    viol = int(np.count_nonzero(np.abs(tau) > half * (1 + tol.probe) + tol.probe))
    return CaseRecord("permutation", worst, 1.0, worst - 1.0, 0.0, viol == 0, seed,
                      {"probes": N, "violations": viol, "r": r.tolist(), "l": l.tolist(),
                       "alpha": [a1 ** p, a2 ** p]})
