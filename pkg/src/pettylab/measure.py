"""Sphere quadrature, surface area measures, mixed volumes, volumes and centers.

Integrals over S^{d-1} go through :class:`SphereQuadrature`.  Deterministic
product rules (d <= 3) carry no standard error; randomized rules (plain
Monte-Carlo or scrambled Sobol points pushed through the Gaussian
normalization x/|x|) are built as ``R`` independent replicates, and the
spread of the replicate estimates is the standard error.  Functions of
several integrals are evaluated per replicate, so nested estimates keep an
honest error bar.
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from . import hull
from .bodies import (Ball, Body, EllipsoidImage, VertexPolytope, unit_ball_volume)
from .errors import (ConvergenceError, MeasureUndefinedError, NotStarBodyError,
                     ParameterError, UnsupportedBodyError)
from .seeding import derive_seed, rng as make_rng


def sphere_area(d):
    """Surface area of S^{d-1}, i.e. d times the volume of the unit ball."""
    return d * unit_ball_volume(d)


# -- estimates -------------------------------------------------------------------

@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    stderr: float = 0.0
    method: str = "exact"
    replicates: tuple | None = None

    @classmethod
    def from_replicates(cls, reps, method):
        reps = np.asarray(reps, dtype=float).ravel()
        if reps.size == 1:
            return cls(float(reps[0]), 0.0, method, None)
        se = float(np.std(reps, ddof=1) / math.sqrt(reps.size))
        return cls(float(np.mean(reps)), se, method, tuple(float(r) for r in reps))

    def rel_stderr(self):
        return self.stderr / abs(self.value) if self.value else math.inf

    def to_json(self):
        out = {"value": self.value, "stderr": self.stderr, "method": self.method}
        if self.replicates is not None:
            out["replicates"] = list(self.replicates)
        return out

    @classmethod
    def from_json(cls, doc):
        reps = doc.get("replicates")
        return cls(doc["value"], doc["stderr"], doc["method"], tuple(reps) if reps else None)


def difference(a, b):
    """(a - b, stderr), paired by replicate when both share a replicate layout."""
    if (a.replicates is not None and b.replicates is not None
            and len(a.replicates) == len(b.replicates)):
        d = np.asarray(a.replicates) - np.asarray(b.replicates)
        return float(np.mean(d)), float(np.std(d, ddof=1) / math.sqrt(d.size))
    return a.value - b.value, math.hypot(a.stderr, b.stderr)


# -- quadrature --------------------------------------------------------------------

PRODUCT, MC, LOW_DISCREPANCY = "product-rule", "monte-carlo", "low-discrepancy"


@dataclass(frozen=True, eq=False)
class SphereQuadrature:
    dim: int
    nodes: np.ndarray      # (R, N, d)
    weights: np.ndarray    # (R, N)
    scheme: str
    size: int
    seed: int | None = None

    @property
    def replicates(self):
        return self.nodes.shape[0]

    @property
    def total(self):
        return float(np.mean(self.weights.sum(axis=1)))

    @property
    def flat_nodes(self):
        return self.nodes.reshape(-1, self.dim)

    def integrate(self, values):
        """Estimate of the integral from node values shaped like ``weights``."""
        v = np.asarray(values, dtype=float).reshape(self.weights.shape)
        reps = np.sum(self.weights * v, axis=1)
        return VolumeEstimate.from_replicates(reps, self.scheme) if self.scheme != PRODUCT \
            else VolumeEstimate(float(reps[0]), 0.0, self.scheme)

    def per_replicate(self, values):
        v = np.asarray(values, dtype=float).reshape(self.weights.shape)
        return np.sum(self.weights * v, axis=1)

    def to_json(self):
        return {"dim": self.dim, "scheme": self.scheme, "size": self.size, "seed": self.seed,
                "nodes": self.nodes.tolist(), "weights": self.weights.tolist()}

    @classmethod
    def from_json(cls, doc):
        return cls(doc["dim"], np.array(doc["nodes"], dtype=float), np.array(doc["weights"], dtype=float),
                   doc["scheme"], doc["size"], doc.get("seed"))


def _product_rule(d, size):
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if d == 2:
        k = max(int(size), 3)
        t = 2 * np.pi * np.arange(k) / k
        return np.column_stack([np.cos(t), np.sin(t)]), np.full(k, 2 * np.pi / k)
    if d == 3:
        nz = max(2, int(round(math.sqrt(size / 2))))
        z, wz = np.polynomial.legendre.leggauss(nz)
        nphi = 2 * nz
        phi = 2 * np.pi * (np.arange(nphi) + 0.5) / nphi
        Z, PHI = np.meshgrid(z, phi, indexing="ij")
        r = np.sqrt(1 - Z * Z)
        nodes = np.stack([r * np.cos(PHI), r * np.sin(PHI), Z], axis=-1).reshape(-1, 3)
        w = (wz[:, None] * np.full(nphi, 2 * np.pi / nphi)[None, :]).ravel()
        return nodes, w
    raise ParameterError("product rules are only available for d <= 3")


def sphere_quadrature(d, scheme="auto", size=4096, seed=0, replicates=8):
    """Nodes and weights on S^{d-1}.

    ``scheme`` is ``"product-rule"`` (d <= 3), ``"monte-carlo"``,
    ``"low-discrepancy"`` or ``"auto"`` (product rule for d <= 3, otherwise
    low-discrepancy).  Randomized schemes return ``replicates`` independent
    copies of ``size`` nodes each (low-discrepancy sizes round up to a power
    of two).
    """
    if int(d) < 1:
        raise ParameterError("sphere dimension must be at least 1")
    d = int(d)
    if scheme == "auto":
        scheme = PRODUCT if d <= 3 else LOW_DISCREPANCY
    if scheme == PRODUCT:
        nodes, w = _product_rule(d, size)
        return SphereQuadrature(d, nodes[None], w[None], PRODUCT, int(size), None)
    if scheme not in (MC, LOW_DISCREPANCY):
        raise ParameterError(f"unknown quadrature scheme {scheme!r}")
    R = max(1, int(replicates))
    N = int(size)
    if scheme == LOW_DISCREPANCY:
        N = 1 << max(1, math.ceil(math.log2(max(N, 2))))
    nodes = np.empty((R, N, d))
    for r in range(R):
        s = derive_seed(seed, scheme, d, r)
        if scheme == MC:
            g = np.random.default_rng(s).standard_normal((N, d))
        else:
            u = qmc.Sobol(d, scramble=True, seed=s).random_base2(int(math.log2(N)))
            g = ndtri(np.clip(u, 1e-16, 1 - 1e-16))
        nodes[r] = g / np.linalg.norm(g, axis=1, keepdims=True)
    w = np.full((R, N), sphere_area(d) / N)
    return SphereQuadrature(d, nodes, w, scheme, N, int(seed))


# -- measures on the sphere ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    dim: int
    directions: np.ndarray   # (k, dim) unit vectors
    weights: np.ndarray      # (k,) positive

    def __post_init__(self):
        if np.any(self.weights <= 0):
            raise ParameterError("atom weights must be positive")

    def __len__(self):
        return len(self.weights)

    def total(self):
        return float(self.weights.sum())

    def center(self):
        return self.weights @ self.directions

    def integrate(self, f):
        return float(self.weights @ f(self.directions))


def surface_measure(K):
    """sigma_K of a full-dimensional polytope in R^n, n <= 3: (normal, facet area)."""
    if not isinstance(K, VertexPolytope):
        raise UnsupportedBodyError("surface measures are exact only for polytopes")
    if K.shape.m != 1 or K.dim > 3:
        raise UnsupportedBodyError("surface measures need a polytope in R^n with n <= 3")
    u, b, a = K.facets()
    return u, b, a


def surface_measure_p(K, p):
    """sigma_{K,p}: atoms (facet normal, facet area * h_K(normal)^(1-p))."""
    if p < 1:
        raise ParameterError(f"p must be at least 1, got {p}")
    u, b, a = surface_measure(K)
    if p == 1:
        return DiscreteMeasure(K.dim, u, a.copy())
    scale = max(1.0, float(np.abs(b).max()))
    if np.any(b <= 1e-12 * scale):
        raise MeasureUndefinedError("Lp surface measure undefined: h_K vanishes on a facet normal "
                                    "(the origin is not interior)")
    return DiscreteMeasure(K.dim, u, a * b ** (1.0 - p))


def lp_mixed_volume(K, L, p):
    """V_{p,n}(K, L) = (1/n) * integral of h_L^p against sigma_{K,p}."""
    mu = surface_measure_p(K, p)
    h = np.asarray(L.support(mu.directions), dtype=float)
    if np.any(h < -1e-12):
        raise ParameterError("L must contain the origin")
    return float(mu.weights @ np.maximum(h, 0.0) ** p) / K.dim


def _gauges(body, quad):
    g = np.asarray(body.gauge(quad.flat_nodes), dtype=float).reshape(quad.weights.shape)
    if not np.all(np.isfinite(g)):
        raise NotStarBodyError(f"{body.kind}: gauge is infinite on a quadrature node "
                               "(not a star body about the origin)")
    if np.any(g <= 0):
        raise NotStarBodyError(f"{body.kind}: gauge vanishes on a quadrature node (unbounded body)")
    return g


def dual_mixed_volume(K, L, p, quad):
    """(1/d) * integral of rho_K^(d+p) * rho_L^(-p) over S^{d-1}."""
    if quad.dim != K.dim or K.dim != L.dim:
        raise ParameterError("quadrature and bodies must share a dimension")
    d = K.dim
    gK = _gauges(K, quad)
    gL = _gauges(L, quad)
    return quad.integrate(gK ** (-(d + p)) * gL ** p / d)


def polar_volume(body, quad):
    d = body.dim
    if quad.dim != d:
        raise ParameterError("quadrature dimension does not match the body")
    return quad.integrate(_gauges(body, quad) ** (-d) / d)


def mc_volume(body, N, seed, box):
    """Hit-or-miss volume inside ``box`` = (lo, hi) or a half-width."""
    if box is None:
        raise ParameterError("Monte-Carlo volume needs a bounding box")
    d = body.dim
    lo, hi = _box(box, d)
    g = make_rng(seed, "mc_volume", d)
    box_vol = float(np.prod(hi - lo))
    hits, done = 0, 0
    step = 1 << 16
    while done < N:
        k = min(step, N - done)
        X = lo + (hi - lo) * g.random((k, d))
        hits += int(np.count_nonzero(body.contains(X)))
        done += k
    f = hits / N
    return VolumeEstimate(box_vol * f, box_vol * math.sqrt(f * (1 - f) / N), "mc-membership")


def _box(box, d):
    if np.isscalar(box):
        r = float(box)
        return np.full(d, -r), np.full(d, r)
    lo, hi = box
    return np.broadcast_to(np.asarray(lo, dtype=float), (d,)).copy(), \
        np.broadcast_to(np.asarray(hi, dtype=float), (d,)).copy()


def volume(body, method="auto", quad=None, N=None, seed=0, box=None):
    """Volume by ``exact-polytope``, ``polar-formula`` or ``mc-membership``."""
    if method == "auto":
        if isinstance(body, (Ball, EllipsoidImage)) or (isinstance(body, VertexPolytope) and body.dim <= 3):
            method = "exact-polytope"
        elif quad is not None:
            method = "polar-formula"
        else:
            method = "mc-membership"
    if method == "exact-polytope":
        if isinstance(body, (Ball, EllipsoidImage)):
            return VolumeEstimate(body.volume(), 0.0, "exact")
        if not isinstance(body, VertexPolytope) or body.dim > 3:
            raise ParameterError("exact volumes need a polytope in dimension <= 3")
        return VolumeEstimate(body.volume() if body.full_dim else 0.0, 0.0, "exact")
    if method == "polar-formula":
        if quad is None:
            raise ParameterError("polar-formula volume needs a quadrature")
        return polar_volume(body, quad)
    if method == "mc-membership":
        return mc_volume(body, N or 100_000, seed, box)
    raise ParameterError(f"unknown volume method {method!r}")


# -- centers ---------------------------------------------------------------------------

def centroid(body, N=200_000, seed=0, box=None):
    if isinstance(body, np.ndarray):
        return np.asarray(body, dtype=float).mean(axis=0)
    if isinstance(body, VertexPolytope) and body.dim <= 3:
        return hull.centroid(body.vertices)
    if isinstance(body, (Ball, EllipsoidImage)):
        return body.center.copy()
    if box is None:
        r = body.bounding_radius()
        box = r
    lo, hi = _box(box, body.dim)
    g = make_rng(seed, "centroid", body.dim)
    X = lo + (hi - lo) * g.random((N, body.dim))
    inside = X[body.contains(X)]
    if len(inside) == 0:
        raise ParameterError("no sample point fell inside the body")
    return inside.mean(axis=0)


class _PolygonPolar:
    """Exact area of (K - z)^o for a polygon K, with its gradient in z."""

    def __init__(self, K):
        u, b, _ = K.facets()
        order = np.argsort(np.arctan2(u[:, 1], u[:, 0]))
        self.u, self.b = u[order], b[order]
        self.cross = self.u[:, 0] * np.roll(self.u[:, 1], -1) - self.u[:, 1] * np.roll(self.u[:, 0], -1)

    def value(self, z):
        c = self.b - self.u @ z
        if np.any(c <= 0):
            return math.inf
        return 0.5 * float(np.sum(self.cross / (c * np.roll(c, -1))))

    def grad(self, z):
        c = self.b - self.u @ z
        c1 = np.roll(c, -1)
        coef = 0.5 * self.cross / (c * c1)
        return (coef / c) @ self.u + (coef / c1) @ np.roll(self.u, -1, axis=0)


class _QuadPolar:
    """(K - z)^o volume by the polar formula: (1/d) * int (h_K - <z,t>)^(-d)."""

    def __init__(self, K, quad):
        self.t = quad.flat_nodes
        self.w = quad.weights.ravel() / quad.replicates
        self.h = np.asarray(K.support(self.t), dtype=float)
        self.d = K.dim

    def value(self, z):
        c = self.h - self.t @ z
        if np.any(c <= 0):
            return math.inf
        return float(self.w @ c ** (-self.d)) / self.d

    def grad(self, z):
        c = self.h - self.t @ z
        return (self.w * c ** (-self.d - 1)) @ self.t


def polar_volume_function(K, quad=None):
    """Callable pair (value, grad) of z -> vol((K - z)^o)."""
    if isinstance(K, VertexPolytope) and K.dim == 2:
        return _PolygonPolar(K)
    if quad is None:
        quad = sphere_quadrature(K.dim, PRODUCT, 4096 if K.dim == 2 else 2 * 48 * 48)
    return _QuadPolar(K, quad)


def santalo_point(K, quad=None, tol=1e-6, max_iter=10_000, grad_tol=1e-6):
    """Minimizer of z -> vol((K - z)^o), started at the centroid.

    Coordinate descent with a shrinking step until the step is below
    ``tol * diameter``; then a few Newton steps on the analytic gradient
    tighten the stationarity condition.
    """
    F = polar_volume_function(K, quad)
    d = K.dim
    try:
        z = np.array(centroid(K), dtype=float)
    except Exception:
        z = np.zeros(d)
    if not math.isfinite(F.value(z)):
        z = np.zeros(d)
    R = K.bounding_radius()
    step = 0.25 * R
    fz = F.value(z)
    trace = []
    it = 0
    while step > tol * R:
        improved = False
        for i in range(d):
            for s in (step, -step):
                y = z.copy()
                y[i] += s
                fy = F.value(y)
                if fy < fz:
                    z, fz, improved = y, fy, True
                    break
        trace.append((it, fz, step))
        if not improved:
            step *= 0.5
        it += 1
        if it > max_iter:
            raise ConvergenceError("Santalo coordinate descent did not converge", trace)
    scale = abs(fz) / max(R, 1e-300)
    for _ in range(8):
        g = F.grad(z)
        if np.linalg.norm(g) <= grad_tol * scale * 1e-3:
            break
        eps = 1e-5 * R
        H = np.empty((d, d))
        for i in range(d):
            e = np.zeros(d)
            e[i] = eps
            H[:, i] = (F.grad(z + e) - F.grad(z - e)) / (2 * eps)
        y = z - np.linalg.solve(0.5 * (H + H.T), g)
        if not (F.value(y) <= fz + 1e-15 * abs(fz)):
            break
        z, fz = y, F.value(y)
    gn = float(np.linalg.norm(F.grad(z)))
    if gn > grad_tol * max(scale, 1.0):
        raise ConvergenceError(f"Santalo point gradient norm {gn:.3g} above tolerance", trace)
    return z


def centers(body, which="centroid", **kw):
    if which == "centroid":
        return centroid(body, **kw)
    if which == "santalo":
        return santalo_point(body, **kw)
    raise ParameterError(f"unknown center {which!r}")
