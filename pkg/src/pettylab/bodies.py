"""Convex bodies in R^d and in the matrix spaces M[n,m].

A point of M[n,m] is stored as a flat row-major array of length d = n*m, so
the inner product <A,B> = tr(A^t B) is the ordinary dot product.  Every body
exposes ``support``, ``gauge`` and ``contains``; these accept a single point
(flat vector, ``(n, m)`` matrix or :class:`MatPoint`) and return a float, or a
batch (``(N, d)`` or ``(N, n, m)``) and return an array.

Support at the origin is 0 for every body, silently.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from . import hull, lp
from .errors import (DegenerateInputError, ParameterError, PolarUndefinedError,
                     ShapeError, UnsupportedBodyError)
from .seeding import rng as make_rng

DIM_CAP = 8


@dataclass(frozen=True)
class MatShape:
    n: int
    m: int = 1

    def __post_init__(self):
        if int(self.n) < 1 or int(self.m) < 1:
            raise ShapeError(f"shape must be positive, got {self.n}x{self.m}")
        if self.n * self.m > DIM_CAP:
            raise ShapeError(f"n*m = {self.n * self.m} exceeds the dimension cap {DIM_CAP}")

    @property
    def dim(self):
        return self.n * self.m

    def as_list(self):
        return [self.n, self.m]


def as_shape(s):
    if isinstance(s, MatShape):
        return s
    if isinstance(s, int):
        return MatShape(s, 1)
    n, m = s
    return MatShape(int(n), int(m))


@dataclass(frozen=True, eq=False)
class MatPoint:
    shape: MatShape
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float).ravel()
        if c.size != self.shape.dim:
            raise ShapeError(f"expected {self.shape.dim} coordinates, got {c.size}")
        object.__setattr__(self, "coords", c)

    @classmethod
    def from_matrix(cls, M):
        M = np.atleast_2d(np.asarray(M, dtype=float))
        return cls(MatShape(*M.shape), M.ravel())

    @property
    def matrix(self):
        return self.coords.reshape(self.shape.n, self.shape.m)

    def __eq__(self, other):
        return (isinstance(other, MatPoint) and self.shape == other.shape
                and np.array_equal(self.coords, other.coords))

    def __hash__(self):
        return hash((self.shape, self.coords.tobytes()))


def flat_points(shape, x):
    """Return (array of shape (N, d), single?) for any accepted point format."""
    if isinstance(x, MatPoint):
        if x.shape != shape:
            raise ShapeError(f"point of shape {x.shape} used with body of shape {shape}")
        return x.coords[None, :], True
    a = np.asarray(x, dtype=float)
    d = shape.dim
    if a.ndim == 0:
        a = a.reshape(1)
    if a.ndim == 1:
        if a.size != d:
            raise ShapeError(f"expected {d} coordinates, got {a.size}")
        return a[None, :], True
    if a.ndim == 2 and a.shape == (shape.n, shape.m):
        return a.reshape(1, d), True
    if a.ndim == 2 and a.shape[1] == d:
        return a, False
    if a.ndim == 3 and a.shape[1:] == (shape.n, shape.m):
        return a.reshape(len(a), d), False
    raise ShapeError(f"cannot read points of shape {a.shape} in M[{shape.n},{shape.m}]")


def _out(v, single):
    return float(v[0]) if single else v


class Body:
    """Common interface; subclasses implement the batched ``_support``/``_gauge``."""

    kind = "body"
    shape: MatShape

    @property
    def dim(self):
        return self.shape.dim

    @property
    def full_dim(self):
        return True

    @property
    def origin_interior(self):
        return True

    def support(self, x):
        X, single = flat_points(self.shape, x)
        return _out(self._support(X), single)

    def gauge(self, x):
        X, single = flat_points(self.shape, x)
        return _out(self._gauge(X), single)

    def radial(self, x):
        g = self.gauge(x)
        with np.errstate(divide="ignore"):
            r = np.divide(1.0, g)
        return float(r) if np.ndim(r) == 0 else r

    def contains(self, x, tol=1e-9):
        X, single = flat_points(self.shape, x)
        return _out(self._contains(X, tol), single)

    def _contains(self, X, tol):
        return self._gauge(X) <= 1.0 + tol

    def _support(self, X):
        raise UnsupportedBodyError(f"{self.kind} has no support function")

    def _gauge(self, X):
        raise UnsupportedBodyError(f"{self.kind} has no gauge")

    def to_json(self):
        raise UnsupportedBodyError(f"{self.kind} bodies are not serializable")

    def bounding_radius(self):
        """Radius of a centered ball containing the body."""
        raise UnsupportedBodyError(f"{self.kind} has no bounding radius")


# -- polytopes ---------------------------------------------------------------

class VertexPolytope(Body):
    kind = "polytope"

    def __init__(self, shape, vertices, normals=None):
        self.shape = as_shape(shape)
        V = np.array(vertices, dtype=float, ndmin=2)
        if V.size == 0:
            raise DegenerateInputError("polytope needs at least one vertex")
        if V.shape[1] != self.shape.dim:
            V = V.reshape(len(V), -1)
            if V.shape[1] != self.shape.dim:
                raise ShapeError(f"vertices have dimension {V.shape[1]}, expected {self.shape.dim}")
        V.setflags(write=False)
        self.vertices = V
        self._full = hull.affine_rank(V) == self.shape.dim
        self._normals = None if normals is None else np.array(normals, dtype=float, ndmin=2)
        self._facets = None

    @property
    def full_dim(self):
        return self._full

    @property
    def origin_interior(self):
        if not self._full:
            return False
        if self.dim <= 3:
            return self.normals is not None
        E = np.eye(self.dim)
        return all(np.isfinite(lp.polytope_gauge(self.vertices, s * e)) for e in E for s in (1.0, -1.0))

    @property
    def normals(self):
        """Normalized H-rep {x : A x <= 1} when available (o interior, d <= 3)."""
        if self._normals is None and self._full and self.dim <= 3:
            u, b, _ = self.facets()
            if np.all(b > 1e-12 * max(1.0, np.abs(b).max())):
                self._normals = u / b[:, None]
        return self._normals

    def facets(self):
        if self._facets is None:
            if not self._full:
                raise DegenerateInputError("facets of a lower-dimensional polytope")
            self._facets = hull.facets(self.vertices)
        return self._facets

    def _support(self, X):
        return np.max(X @ self.vertices.T, axis=1)

    def _gauge(self, X):
        A = self.normals
        if A is not None:
            return np.maximum(np.max(X @ A.T, axis=1), 0.0)
        return np.array([lp.polytope_gauge(self.vertices, x) for x in X])

    def _contains(self, X, tol):
        if self._full and self.dim <= 3:
            u, b, _ = self.facets()
            scale = max(1.0, float(np.abs(self.vertices).max()))
            return np.all(X @ u.T <= b + tol * scale, axis=1)
        if self.normals is not None:
            return self._gauge(X) <= 1.0 + tol
        return np.array([_in_hull_lp(self.vertices, x, tol) for x in X])

    def bounding_radius(self):
        return float(np.max(np.linalg.norm(self.vertices, axis=1)))

    def volume(self):
        return hull.volume(self.vertices)

    def to_json(self):
        return {"shape": self.shape.as_list(), "kind": "polytope",
                "vertices": self.vertices.tolist()}


def _in_hull_lp(V, x, tol):
    k = len(V)
    A = np.vstack([V.T, np.ones((1, k))])
    b = np.concatenate([x, [1.0]])
    return lp.solve_standard(np.zeros(k), A, b, tol=1e-10).status == lp.OPTIMAL


class Segment(VertexPolytope):
    kind = "segment"

    def __init__(self, shape, a, b):
        self.a = np.asarray(a, dtype=float).ravel()
        self.b = np.asarray(b, dtype=float).ravel()
        super().__init__(shape, np.array([self.a, self.b]))

    def to_json(self):
        return {"shape": self.shape.as_list(), "kind": "segment",
                "a": self.a.tolist(), "b": self.b.tolist()}


class HPolytope(Body):
    """{x : A x <= 1}, which has the origin in its interior."""

    kind = "hpolytope"

    def __init__(self, shape, normals):
        self.shape = as_shape(shape)
        A = np.array(normals, dtype=float, ndmin=2)
        if A.shape[1] != self.shape.dim:
            raise ShapeError("normals have the wrong dimension")
        A.setflags(write=False)
        self.normals = A

    def _gauge(self, X):
        return np.maximum(np.max(X @ self.normals.T, axis=1), 0.0)

    def _support(self, X):
        return np.array([lp.hpolytope_support(self.normals, x) for x in X])

    def bounding_radius(self):
        h = self._support(np.vstack([np.eye(self.dim), -np.eye(self.dim)]))
        return float(np.sqrt(np.sum(np.maximum(h[:self.dim], h[self.dim:]) ** 2)))

    def to_json(self):
        return {"shape": self.shape.as_list(), "kind": "hpolytope",
                "normals": self.normals.tolist()}


# -- smooth bodies -------------------------------------------------------------

class Ball(Body):
    kind = "ball"

    def __init__(self, shape, radius=1.0, center=None):
        self.shape = as_shape(shape)
        if not radius > 0:
            raise ParameterError("ball radius must be positive")
        self.radius = float(radius)
        self.center = np.zeros(self.dim) if center is None else np.asarray(center, dtype=float).ravel()
        if self.center.size != self.dim:
            raise ShapeError("center has the wrong dimension")

    @property
    def origin_interior(self):
        return bool(np.linalg.norm(self.center) < self.radius)

    def _support(self, X):
        return self.radius * np.linalg.norm(X, axis=1) + X @ self.center

    def _gauge(self, X):
        if not np.any(self.center):
            return np.linalg.norm(X, axis=1) / self.radius
        return _shifted_ellipsoid_gauge(X / self.radius, self.center / self.radius)

    def bounding_radius(self):
        return self.radius + float(np.linalg.norm(self.center))

    def volume(self):
        d = self.dim
        return unit_ball_volume(d) * self.radius ** d

    def to_json(self):
        out = {"shape": self.shape.as_list(), "kind": "ball", "radius": self.radius}
        if np.any(self.center):
            out["center"] = self.center.tolist()
        return out


def _shifted_ellipsoid_gauge(a, b):
    """Gauge of {c + B} with a = E^{-1}x, b = E^{-1}c (|b| < 1)."""
    aa = np.einsum("ij,ij->i", a, a)
    ab = a @ b
    bb = float(b @ b)
    if bb >= 1:
        raise PolarUndefinedError("origin is not interior")
    mu = (ab + np.sqrt(ab * ab - aa * (bb - 1.0))) / np.where(aa > 0, aa, 1.0)
    with np.errstate(divide="ignore"):
        return np.where(aa > 0, 1.0 / mu, 0.0)


class EllipsoidImage(Body):
    """{c + A y : |y| <= 1} with A acting on flat coordinates."""

    kind = "ellipsoid"

    def __init__(self, shape, A, center=None):
        self.shape = as_shape(shape)
        A = np.array(A, dtype=float, ndmin=2)
        d = self.dim
        if A.shape[0] != d:
            raise ShapeError(f"ellipsoid matrix must have {d} rows")
        A.setflags(write=False)
        self.A = A
        self.center = np.zeros(d) if center is None else np.asarray(center, dtype=float).ravel()
        self._inv = np.linalg.inv(A) if A.shape == (d, d) and abs(np.linalg.det(A)) > 0 else None

    @property
    def full_dim(self):
        return self._inv is not None

    @property
    def origin_interior(self):
        return self._inv is not None and np.linalg.norm(self._inv @ self.center) < 1

    def _support(self, X):
        return np.linalg.norm(X @ self.A, axis=1) + X @ self.center

    def _gauge(self, X):
        if self._inv is None:
            raise UnsupportedBodyError("gauge of a degenerate ellipsoid")
        a = X @ self._inv.T
        if not np.any(self.center):
            return np.linalg.norm(a, axis=1)
        return _shifted_ellipsoid_gauge(a, self._inv @ self.center)

    def bounding_radius(self):
        return float(np.linalg.norm(self.A, 2) + np.linalg.norm(self.center))

    def volume(self):
        return unit_ball_volume(self.dim) * abs(float(np.linalg.det(self.A)))

    def to_json(self):
        out = {"shape": self.shape.as_list(), "kind": "ellipsoid", "A": self.A.tolist()}
        if np.any(self.center):
            out["center"] = self.center.tolist()
        return out


# -- combinations and images ---------------------------------------------------

class LpSum(Body):
    kind = "lp_sum"

    def __init__(self, parts, weights, p):
        if p < 1:
            raise ParameterError(f"Lp sums need p >= 1, got {p}")
        if not parts:
            raise ParameterError("lp_sum needs at least one part")
        shapes = {b.shape for b in parts}
        if len(shapes) != 1:
            raise ShapeError("all parts of an Lp sum must share a shape")
        w = np.asarray(weights, dtype=float)
        if w.shape != (len(parts),) or np.any(w <= 0):
            raise ParameterError("weights must be positive, one per part")
        self.shape = parts[0].shape
        self.parts = tuple(parts)
        self.weights = w
        self.p = float(p)

    @property
    def full_dim(self):
        return any(b.full_dim for b in self.parts)

    def _support(self, X):
        acc = np.zeros(len(X))
        for w, b in zip(self.weights, self.parts):
            acc += w * np.maximum(b._support(X), 0.0) ** self.p
        return acc ** (1.0 / self.p)

    def bounding_radius(self):
        return float(sum(w ** (1 / self.p) * b.bounding_radius() for w, b in zip(self.weights, self.parts)))

    def to_json(self):
        return {"shape": self.shape.as_list(), "kind": "lp_sum", "p": self.p,
                "weights": self.weights.tolist(), "parts": [b.to_json() for b in self.parts]}


def _left_flat(A, m):
    return np.kron(A, np.eye(m))


def _right_flat(B, n):
    return np.kron(np.eye(n), np.asarray(B).T)


class LinearImageLeft(Body):
    """A.K = {A x : x in K} for A of size k×n."""

    kind = "left_image"

    def __init__(self, A, inner):
        A = np.array(A, dtype=float, ndmin=2)
        if A.shape[1] != inner.shape.n:
            raise ShapeError(f"left factor has {A.shape[1]} columns, body has {inner.shape.n} rows")
        self.A = A
        self.inner = inner
        self.shape = MatShape(A.shape[0], inner.shape.m)
        self._M = _left_flat(A, inner.shape.m)  # flat map x -> A.x

    @property
    def full_dim(self):
        return self.inner.full_dim and self.A.shape[0] == self.A.shape[1] and abs(np.linalg.det(self.A)) > 0

    def _support(self, X):
        return self.inner._support(X @ self._M)  # h_K(A^t.x)

    def _gauge(self, X):
        if not self.full_dim:
            raise UnsupportedBodyError("gauge of a non-invertible image")
        return self.inner._gauge(np.linalg.solve(self._M, X.T).T)

    def bounding_radius(self):
        return float(np.linalg.norm(self.A, 2) * self.inner.bounding_radius())

    def to_json(self):
        return {"shape": self.shape.as_list(), "kind": "left_image", "A": self.A.tolist(),
                "inner": self.inner.to_json()}


class LinearImageRight(Body):
    """K.B = {x B : x in K} for B of size m×l."""

    kind = "right_image"

    def __init__(self, inner, B):
        B = np.array(B, dtype=float, ndmin=2)
        if B.shape[0] != inner.shape.m:
            raise ShapeError(f"right factor has {B.shape[0]} rows, body has {inner.shape.m} columns")
        self.B = B
        self.inner = inner
        self.shape = MatShape(inner.shape.n, B.shape[1])
        self._M = _right_flat(B, inner.shape.n)  # flat map x -> x.B

    @property
    def full_dim(self):
        return self.inner.full_dim and self.B.shape[0] == self.B.shape[1] and abs(np.linalg.det(self.B)) > 0

    def _support(self, X):
        return self.inner._support(X @ self._M)  # h_K(y.B^t)

    def _gauge(self, X):
        if not self.full_dim:
            raise UnsupportedBodyError("gauge of a non-invertible image")
        return self.inner._gauge(np.linalg.solve(self._M, X.T).T)

    def bounding_radius(self):
        return float(np.linalg.norm(self.B, 2) * self.inner.bounding_radius())

    def to_json(self):
        return {"shape": self.shape.as_list(), "kind": "right_image", "B": self.B.tolist(),
                "inner": self.inner.to_json()}


# -- oracles -------------------------------------------------------------------

class SupportOracle(Body):
    """Body known only through a support function.

    ``h`` maps an ``(N, d)`` array to ``(N,)`` when ``vectorized`` is true,
    otherwise a single flat point to a float.
    """

    kind = "support_oracle"

    def __init__(self, shape, h, vectorized=True, radius=None, name=None):
        self.shape = as_shape(shape)
        self._h = h
        self._vec = vectorized
        self._radius = radius
        self.name = name or "support_oracle"

    def _support(self, X):
        if self._vec:
            return np.asarray(self._h(X), dtype=float)
        return np.array([self._h(x) for x in X], dtype=float)

    def bounding_radius(self):
        if self._radius is None:
            raise UnsupportedBodyError("support oracle without a bounding radius")
        return float(self._radius)


class GaugeOracle(Body):
    """Star body known only through its gauge (the origin is interior)."""

    kind = "gauge_oracle"

    def __init__(self, shape, g, vectorized=True, radius=None, name=None):
        self.shape = as_shape(shape)
        self._g = g
        self._vec = vectorized
        self._radius = radius
        self.name = name or "gauge_oracle"

    def _gauge(self, X):
        if self._vec:
            return np.asarray(self._g(X), dtype=float)
        return np.array([self._g(x) for x in X], dtype=float)

    def bounding_radius(self):
        if self._radius is None:
            raise UnsupportedBodyError("gauge oracle without a bounding radius")
        return float(self._radius)


# -- module-level operations -----------------------------------------------------

def support(body, x):
    return body.support(x)


def gauge(body, x):
    return body.gauge(x)


def contains(body, x, tol=1e-9):
    return body.contains(x, tol)


def unit_ball_volume(d):
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def polar(body):
    """Polar body; the gauge of the result is the support of the input."""
    if isinstance(body, Ball):
        if np.any(body.center):
            return GaugeOracle(body.shape, body._support, name="polar(ball)")
        return Ball(body.shape, 1.0 / body.radius)
    if isinstance(body, EllipsoidImage) and not np.any(body.center):
        if body._inv is None:
            raise PolarUndefinedError("origin is not interior")
        return EllipsoidImage(body.shape, body._inv.T)
    if isinstance(body, VertexPolytope):
        if not body.full_dim:
            raise PolarUndefinedError("origin is not interior (lower-dimensional polytope)")
        if body.dim <= 3:
            u, b, _ = body.facets()
            if np.any(b <= 1e-12 * np.abs(b).max()):
                raise PolarUndefinedError("origin is not interior")
            return VertexPolytope(body.shape, u / b[:, None], normals=body.vertices)
        if not np.isfinite(lp.polytope_gauge(body.vertices, -body.vertices.mean(axis=0))):
            raise PolarUndefinedError("origin is not interior")
        return HPolytope(body.shape, body.vertices)
    if isinstance(body, HPolytope):
        return VertexPolytope(body.shape, body.normals)
    if isinstance(body, SupportOracle):
        return GaugeOracle(body.shape, body._h, body._vec, name=f"polar({body.name})")
    if isinstance(body, GaugeOracle):
        return SupportOracle(body.shape, body._g, body._vec, name=f"polar({body.name})")
    if not body.origin_interior:
        raise PolarUndefinedError("origin is not interior")
    return GaugeOracle(body.shape, body._support, name=f"polar({body.kind})")


def transform(body, left=None, right=None):
    """Left image A.K and/or right image K.B; closed forms stay closed."""
    out = body
    if left is not None:
        A = np.array(left, dtype=float, ndmin=2)
        if A.shape[1] != out.shape.n:
            raise ShapeError(f"left factor has {A.shape[1]} columns, body has {out.shape.n} rows")
        out = _image(out, _left_flat(A, out.shape.m), MatShape(A.shape[0], out.shape.m),
                     lambda b: LinearImageLeft(A, b))
    if right is not None:
        B = np.array(right, dtype=float, ndmin=2)
        if B.shape[0] != out.shape.m:
            raise ShapeError(f"right factor has {B.shape[0]} rows, body has {out.shape.m} columns")
        out = _image(out, _right_flat(B, out.shape.n), MatShape(out.shape.n, B.shape[1]),
                     lambda b: LinearImageRight(b, B))
    return out


def _image(body, M, shape, fallback):
    if isinstance(body, VertexPolytope):
        V = body.vertices @ M.T
        if V.shape[1] == body.dim and body.full_dim and abs(np.linalg.det(M)) > 0:
            return VertexPolytope(shape, V)
        return VertexPolytope(shape, hull.extreme_points(V))
    if isinstance(body, Ball):
        return EllipsoidImage(shape, body.radius * M, M @ body.center)
    if isinstance(body, EllipsoidImage):
        return EllipsoidImage(shape, M @ body.A, M @ body.center)
    return fallback(body)


def lp_sum(parts, weights, p):
    if p < 1:
        raise ParameterError(f"Lp sums need p >= 1, got {p}")
    if len(parts) == 1 and weights[0] == 1:
        return parts[0]
    return LpSum(parts, weights, p)


def translate(body, z):
    """K + z for polytopes, balls and ellipsoids."""
    z = np.asarray(z, dtype=float).ravel()
    if isinstance(body, VertexPolytope):
        return VertexPolytope(body.shape, body.vertices + z)
    if isinstance(body, Ball):
        return Ball(body.shape, body.radius, body.center + z)
    if isinstance(body, EllipsoidImage):
        return EllipsoidImage(body.shape, body.A, body.center + z)
    raise UnsupportedBodyError(f"cannot translate {body.kind}")


def _cube_vertices(d):
    return np.array(np.meshgrid(*([[-1.0, 1.0]] * d), indexing="ij")).reshape(d, -1).T


def make_standard(kind, shape, *, a=None, b=None, k=None, seed=0):
    """Standard bodies: ball, cube, simplex_orth, cross, segment, random_polytope."""
    shape = as_shape(shape)
    d = shape.dim
    if kind == "ball":
        return Ball(shape, 1.0)
    if kind == "cube":
        I = np.eye(d)
        return VertexPolytope(shape, _cube_vertices(d), normals=np.vstack([I, -I]))
    if kind == "simplex_orth":
        return VertexPolytope(shape, np.vstack([np.zeros(d), np.eye(d)]))
    if kind == "cross":
        I = np.eye(d)
        return VertexPolytope(shape, np.vstack([I, -I]), normals=_cube_vertices(d))
    if kind == "segment":
        if a is None or b is None:
            raise ParameterError("segment needs endpoints a and b")
        return Segment(shape, a, b)
    if kind == "random_polytope":
        if k is None or k < d + 1:
            raise DegenerateInputError(f"random polytope needs k >= d+1 = {d + 1} points")
        return random_polytope(shape, k, seed)
    raise ParameterError(f"unknown standard body {kind!r}")


def random_polytope(shape, k, seed):
    """Hull of k Gaussian points, translated so the vertex mean is the origin."""
    shape = as_shape(shape)
    g = make_rng(seed, "random_polytope", k, shape.n, shape.m)
    P = g.standard_normal((k, shape.dim))
    V = hull.extreme_points(P)
    if hull.affine_rank(V) < shape.dim:
        raise DegenerateInputError("random points are degenerate")
    return VertexPolytope(shape, V - V.mean(axis=0))


def regular_polygon(k, radius=1.0, phase=0.0):
    t = phase + 2 * np.pi * np.arange(k) / k
    return VertexPolytope(MatShape(2, 1), radius * np.column_stack([np.cos(t), np.sin(t)]))


def centered(body):
    """Translate a polytope (d <= 3) so its centroid is the origin."""
    return translate(body, -hull.centroid(body.vertices))


def polytope_from_support(body, directions):
    """Outer polytope {x : <u, x> <= h(u)} over the given directions (d <= 3)."""
    U = np.asarray(directions, dtype=float)
    h = body.support(U)
    if np.any(h <= 0):
        raise PolarUndefinedError("origin is not interior")
    P = U / h[:, None]  # conv(P) is the polar of the outer polytope
    u, c, _ = hull.facets(P)
    return VertexPolytope(body.shape, u / c[:, None])


def sphere_directions(d, k):
    """Deterministic directions covering S^{d-1} (d <= 3)."""
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        t = 2 * np.pi * np.arange(k) / k
        return np.column_stack([np.cos(t), np.sin(t)])
    if d == 3:  # Fibonacci lattice
        i = np.arange(k) + 0.5
        z = 1 - 2 * i / k
        phi = np.pi * (1 + 5 ** 0.5) * i
        r = np.sqrt(1 - z * z)
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    raise ParameterError("deterministic direction sets are only provided for d <= 3")


# -- serialization ------------------------------------------------------------------

def from_json(doc):
    kind = doc["kind"]
    shape = as_shape(doc["shape"])
    if kind == "polytope":
        return VertexPolytope(shape, doc["vertices"])
    if kind == "segment":
        return Segment(shape, doc["a"], doc["b"])
    if kind == "hpolytope":
        return HPolytope(shape, doc["normals"])
    if kind == "ball":
        return Ball(shape, doc["radius"], doc.get("center"))
    if kind == "ellipsoid":
        return EllipsoidImage(shape, doc["A"], doc.get("center"))
    if kind == "lp_sum":
        return LpSum([from_json(b) for b in doc["parts"]], doc["weights"], doc["p"])
    if kind == "left_image":
        return LinearImageLeft(doc["A"], from_json(doc["inner"]))
    if kind == "right_image":
        return LinearImageRight(from_json(doc["inner"]), doc["B"])
    if kind == "standard":
        return make_standard(doc["name"], shape, a=doc.get("a"), b=doc.get("b"),
                             k=doc.get("k"), seed=doc.get("seed", 0))
    raise ParameterError(f"unknown body kind {kind!r}")
