"""Sobolev-function side: gradient measures, function projection bodies, sharp constants.

For f on R^n the projection body of f has support

    h(theta)^p = integral over R^n of h_Q(grad f(v)^t . theta)^p dv,

which is a ProjectionBody whose atoms are the grid gradients: direction
g/|g| with weight w |g|^p.  Integrals over R^n use a radial-spherical grid
v = center + M (rho u): Gauss-Legendre in t with rho = s t / (1 - t) (the
whole half line, so polynomial tails need no truncation radius), or, for
smoothed indicators, Gauss-Legendre in rho / rho_K(u) across the thin shell.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import minimize
from scipy.special import gamma as Gamma

from .bodies import Ball, MatShape, VertexPolytope, unit_ball_volume
from .errors import ParameterError, TruncationError, UnsupportedBodyError
from .measure import PRODUCT, sphere_quadrature
from .operators import PolarProjectionBody, ProjectionBody, ball_atoms

SPHERE_SIZE = {2: 1024, 3: 2 * 24 * 24}


def critical_exponent(n, p):
    if not 1 <= p < n:
        raise ParameterError(f"need 1 <= p < n, got p={p}, n={n}")
    return n * p / (n - p)


def aubin_talenti(p, n):
    """Sharp constant a_{p,n} of the Lp Sobolev inequality ||grad f||_p >= a ||f||_{p*}."""
    if not 1 <= p < n:
        raise ParameterError(f"need 1 <= p < n, got p={p}, n={n}")
    w = unit_ball_volume(n)
    if p == 1:
        return n * w ** (1.0 / n)
    return (n ** (1 / p) * ((n - p) / (p - 1)) ** ((p - 1) / p)
            * (w / Gamma(n) * Gamma(n / p) * Gamma(n + 1 - n / p)) ** (1 / n))


def radial_quotient_minimum(n, p, nodes=400, scale=1.0, reach=1e4):
    """min of ||grad f||_p / ||f||_{p*} over radial profiles, by direct minimization.

    The profile is piecewise linear in rho on 0 and a geometric grid from
    scale/reach to scale*reach, and vanishes at the outer end.  Every cell
    has a bounded radius ratio and is integrated with 4 Gauss points, so each
    trial profile is a genuine compactly supported Sobolev function and its
    quotient bounds the sharp constant from above.  Independent of the closed
    form of a_{p,n}.
    """
    ps = critical_exponent(n, p)
    r = np.r_[0.0, np.geomspace(scale / reach, scale * reach, nodes)]
    dr = np.diff(r)
    g, gw = np.polynomial.legendre.leggauss(4)
    g, gw = 0.5 * (g + 1), 0.5 * gw
    rho = r[:-1, None] + dr[:, None] * g
    w = n * unit_ball_volume(n) * rho ** (n - 1) * dr[:, None] * gw
    wsum = w.sum(axis=1)

    def obj(x):
        phi = np.r_[np.exp(x), 0.0]
        D = np.diff(phi) / dr
        v = phi[:-1, None] * (1 - g) + phi[1:, None] * g
        G = float(wsum @ np.abs(D) ** p)
        F = float(np.sum(w * v ** ps))
        dG_dD = p * np.abs(D) ** (p - 1) * np.sign(D) * wsum
        dF_dv = ps * w * v ** (ps - 1)
        dphi = (np.r_[0.0, dG_dD / dr] - np.r_[dG_dD / dr, 0.0]) / (p * G)
        dphi -= (np.r_[(dF_dv * (1 - g)).sum(axis=1), 0.0] + np.r_[0.0, (dF_dv * g).sum(axis=1)]) / (ps * F)
        return math.log(G) / p - math.log(F) / ps, dphi[:-1] * phi[:-1]

    x0 = -np.log1p((r[:-1] / scale) ** 2) * ((n - 2) / 2 if n > 2 else 1.0)
    # the quotient is scale invariant in phi; the bounds only keep exp(x) finite
    res = minimize(obj, x0, jac=True, method="L-BFGS-B", bounds=[(-150.0, 50.0)] * len(x0),
                   options={"maxiter": 8000, "ftol": 1e-15, "gtol": 1e-12, "maxcor": 30})
    return math.exp(res.fun)


def sharp_d(n, p, Q, quad=None, ball_size=None):
    """d_{n,p}(Q) = (n omega_n)^(1/p) (nm vol(Pi^o_{Q,p} B))^(1/(nm)) with its standard error."""
    from .operators import polar_projection_volume
    m = Q.shape.m
    d = n * m
    B = Ball(MatShape(n, 1))
    v = polar_projection_volume(B, Q, p, quad, ball_size=ball_size)
    val = (n * unit_ball_volume(n)) ** (1 / p) * (d * v.value) ** (1 / d)
    return val, val * v.rel_stderr() / d


def sobolev_constants(n, p, Q, quad=None):
    """(a_{p,n}, d_{n,p}(Q), stderr of d)."""
    dv, se = sharp_d(n, p, Q, quad)
    return aubin_talenti(p, n), dv, se


# -- functions -------------------------------------------------------------------------

class SmoothFunction:
    """f on R^n with gradient and a description of where its mass sits.

    The integration frame is v = center + frame @ (rho * u); ``radius(u)``
    (optional) rescales rho per direction, which puts thin shells around
    a star-shaped level set on a fixed grid.
    """

    def __init__(self, n, value, grad=None, center=None, frame=None, scale=1.0,
                 radius=None, shell=None, name="function", params=None):
        self.n = int(n)
        self._value = value
        self._grad = grad
        self.center = np.zeros(n) if center is None else np.asarray(center, dtype=float).ravel()
        self.frame = np.eye(n) if frame is None else np.asarray(frame, dtype=float)
        self.scale = float(scale)
        self.radius = radius
        self.shell = shell
        self.name = name
        self.params = params or {}

    def value(self, V):
        return self._value(np.atleast_2d(V))

    def grad(self, V):
        V = np.atleast_2d(V)
        if self._grad is None:
            return self.fd_grad(V)
        return self._grad(V)

    def fd_grad(self, V, h=None):
        V = np.atleast_2d(np.asarray(V, dtype=float))
        h = 1e-5 * self.scale if h is None else h
        out = np.empty_like(V)
        for i in range(self.n):
            e = np.zeros(self.n)
            e[i] = h
            out[:, i] = (self._value(V + e) - self._value(V - e)) / (2 * h)
        return out

    def compose(self, A):
        """v -> f(A^{-1} v)."""
        A = np.asarray(A, dtype=float)
        Ai = np.linalg.inv(A)
        f, g = self._value, self._grad
        grad = None if g is None else (lambda V: g(V @ Ai.T) @ Ai)
        return SmoothFunction(self.n, lambda V: f(V @ Ai.T), grad, A @ self.center, A @ self.frame,
                              self.scale, self.radius, self.shell, f"{self.name}∘A^-1",
                              dict(self.params, composed=A.tolist()))

    def grid(self, radial=128, sphere=None, scale=None):
        """Nodes and weights of the radial-spherical rule for this function."""
        n = self.n
        q = sphere_quadrature(n, PRODUCT, sphere or SPHERE_SIZE.get(n, 1024))
        U, wu = q.nodes[0], q.weights[0]
        rad = np.ones(len(U)) if self.radius is None else np.asarray(self.radius(U), dtype=float)
        if self.shell is None:
            s = self.scale if scale is None else scale
            t, wt = np.polynomial.legendre.leggauss(radial)
            t = 0.5 * (t + 1)
            wt = 0.5 * wt
            rho = s * t / (1 - t)
            wr = wt * s / (1 - t) ** 2
        else:
            inner, width = self.shell
            parts = []
            for a, b, k in ((0.0, inner - width / 2, radial // 4), (inner - width / 2, inner + width / 2, radial)):
                x, w = np.polynomial.legendre.leggauss(max(k, 4))
                parts.append((a + (b - a) * 0.5 * (x + 1), 0.5 * (b - a) * w))
            rho = np.concatenate([p[0] for p in parts])
            wr = np.concatenate([p[1] for p in parts])
        # v = c + M (rho * rad(u) * u); dv = |det M| rad^n rho^(n-1) drho du
        P = (rho[:, None, None] * (rad[:, None] * U)[None]).reshape(-1, n)
        V = self.center + P @ self.frame.T
        W = (wr[:, None] * rho[:, None] ** (n - 1) * (wu * rad ** n)[None]).ravel() * abs(np.linalg.det(self.frame))
        return V, W

    def gradient_measure(self, radial=128, sphere=None, check=True):
        V, W = self.grid(radial, sphere)
        G = self.grad(V)
        F = self.value(V)
        gm = GradMeasure(V, W, G, F)
        if check and self.shell is None:
            V2, W2 = self.grid(radial, sphere, scale=2 * self.scale)
            a = float(W @ np.einsum("ij,ij->i", G, G))
            b = float(W2 @ np.einsum("ij,ij->i", *(2 * [self.grad(V2)])))
            if abs(a - b) > 1e-2 * max(abs(a), abs(b)):
                raise TruncationError(f"{self.name}: radial rule changes the gradient integral by "
                                      f"{abs(a - b) / max(abs(a), abs(b)):.2%} when its scale doubles")
        return gm

    def norm(self, q, radial=128, sphere=None):
        V, W = self.grid(radial, sphere)
        return float(W @ np.abs(self.value(V)) ** q) ** (1 / q)

    def to_json(self):
        return {"kind": self.params.get("kind", self.name), **self.params}


@dataclass
class GradMeasure:
    points: np.ndarray
    weights: np.ndarray
    grads: np.ndarray
    values: np.ndarray

    def gradient_norm(self, p):
        return float(self.weights @ np.linalg.norm(self.grads, axis=1) ** p) ** (1 / p)

    def center_of_mass(self):
        return self.weights @ self.grads

    def function_norm(self, q):
        return float(self.weights @ np.abs(self.values) ** q) ** (1 / q)


def extremal_function(n, p, A=None, v0=None, alpha=1.0):
    """(alpha + |A(v - v0)|^(p/(p-1)))^(-(n-p)/p), the equality case of the sharp inequality."""
    if not 1 < p < n:
        raise ParameterError(f"extremal functions need 1 < p < n, got p={p}, n={n}")
    if alpha <= 0:
        raise ParameterError("alpha must be positive")
    A = np.eye(n) if A is None else np.asarray(A, dtype=float)
    v0 = np.zeros(n) if v0 is None else np.asarray(v0, dtype=float).ravel()
    q = p / (p - 1)
    k = (n - p) / p

    def val(V):
        rho = np.linalg.norm((V - v0) @ A.T, axis=1)
        return (alpha + rho ** q) ** (-k)

    def grad(V):
        Y = (V - v0) @ A.T
        rho = np.linalg.norm(Y, axis=1)
        # d/drho times y/rho, written as rho^(q-2) y to stay finite at rho = 0
        c = -k * q * rho ** (q - 2) * (alpha + rho ** q) ** (-k - 1)
        c = np.where(rho > 0, c, 0.0)
        return (c[:, None] * Y) @ A

    return SmoothFunction(n, val, grad, v0, np.linalg.inv(A), alpha ** (1 / q), name="extremal",
                          params={"kind": "extremal", "n": n, "p": p, "A": A.tolist(), "v0": v0.tolist(),
                                  "alpha": alpha})


def gaussian(n, A=None, v0=None):
    """exp(-|A(v - v0)|^2)."""
    A = np.eye(n) if A is None else np.asarray(A, dtype=float)
    v0 = np.zeros(n) if v0 is None else np.asarray(v0, dtype=float).ravel()

    def val(V):
        Y = (V - v0) @ A.T
        return np.exp(-np.einsum("ij,ij->i", Y, Y))

    def grad(V):
        Y = (V - v0) @ A.T
        return (-2 * np.exp(-np.einsum("ij,ij->i", Y, Y))[:, None] * Y) @ A

    return SmoothFunction(n, val, grad, v0, np.linalg.inv(A), 1.0, name="gaussian",
                          params={"kind": "gaussian", "n": n, "A": A.tolist(), "v0": v0.tolist()})


def _smoothstep(x):
    """1 for x <= -1/2, 0 for x >= 1/2, cubic in between; and its derivative."""
    y = np.clip(x + 0.5, 0, 1)
    return 1 - y * y * (3 - 2 * y), np.where((x > -0.5) & (x < 0.5), -6 * y * (1 - y), 0.0)


def smoothed_indicator(K, width=1e-2):
    """S((gauge_K(v) - 1)/width) with a C^1 step S, for a polytope K with o interior."""
    if not isinstance(K, VertexPolytope) or K.normals is None:
        raise UnsupportedBodyError("smoothed indicators need a polytope with the origin interior")
    A = K.normals
    n = K.dim

    def val(V):
        return _smoothstep((np.max(V @ A.T, axis=1) - 1) / width)[0]

    def grad(V):
        s = V @ A.T
        i = np.argmax(s, axis=1)
        ds = _smoothstep((s[np.arange(len(V)), i] - 1) / width)[1] / width
        return ds[:, None] * A[i]

    return SmoothFunction(n, val, grad, radius=lambda U: 1.0 / np.max(U @ A.T, axis=1), shell=(1.0, width),
                          name="smoothed_indicator", params={"kind": "smoothed_indicator", "width": width,
                                                             "K": K.to_json()})


def from_descriptor(doc):
    kind = doc["kind"]
    if kind == "extremal":
        return extremal_function(doc["n"], doc["p"], doc.get("A"), doc.get("v0"), doc.get("alpha", 1.0))
    if kind == "gaussian":
        return gaussian(doc["n"], doc.get("A"), doc.get("v0"))
    raise ParameterError(f"unknown function kind {kind!r}")


# -- bodies and the sharp inequality -------------------------------------------------------

def function_projection_body(f, Q, p, radial=128, sphere=None, measure=None):
    """Projection body of f: atoms (g/|g|, w |g|^p) of the gradient measure."""
    gm = measure or f.gradient_measure(radial, sphere)
    g = np.linalg.norm(gm.grads, axis=1)
    keep = g > 0
    return ProjectionBody(gm.grads[keep] / g[keep, None], gm.weights[keep] * g[keep] ** p, Q, p,
                          {"f": f.name})


@dataclass
class SobolevResult:
    ratio: float
    stderr: float
    E: float
    norm: float
    a: float
    d: float
    replicates: tuple | None = None

    def to_json(self):
        return {"ratio": self.ratio, "stderr": self.stderr, "E": self.E, "norm": self.norm,
                "a": self.a, "d": self.d}


def sobolev_ratio(f, Q, p, quad=None, radial=128, sphere=None):
    """E_p(Q, f) / (a_{p,n} ||f||_{p*}); at least 1, with equality on extremal functions.

    The ball body in d_{n,p}(Q) and the body of f share the sphere nodes of
    the gradient grid and the quadrature on S^{nm-1}, so for radial f the
    angular discretization cancels.
    """
    n, m = f.n, Q.shape.m
    d = n * m
    ps = critical_exponent(n, p)
    sphere = sphere or SPHERE_SIZE.get(n, 1024)
    gm = f.gradient_measure(radial, sphere)
    pf = function_projection_body(f, Q, p, measure=gm)
    U, w = ball_atoms(n, sphere, 1.0, None, p)
    pB = ProjectionBody(U, w, Q, p)
    if quad is None:
        quad = sphere_quadrature(d)
    T = quad.flat_nodes
    hf = pf._power(T).reshape(quad.weights.shape)
    hB = pB._power(-T).reshape(quad.weights.shape)
    If = np.sum(quad.weights * hf ** (-d / p), axis=1)
    IB = np.sum(quad.weights * hB ** (-d / p), axis=1)
    c = (n * unit_ball_volume(n)) ** (1 / p)
    dn = c * IB ** (1 / d)  # d_{n,p}(Q) per replicate (nm vol = IB)
    E = dn * If ** (-1 / d)
    norm = gm.function_norm(ps)
    a = aubin_talenti(p, n)
    ratio = E / (a * norm)
    se = 0.0 if len(ratio) == 1 else float(np.std(ratio, ddof=1) / math.sqrt(len(ratio)))
    return SobolevResult(float(ratio.mean()), se, float(E.mean()), norm, a, float(dn.mean()),
                         tuple(ratio.tolist()))
