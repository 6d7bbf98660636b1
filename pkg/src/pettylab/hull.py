"""Convex hulls, facets and exact volumes in dimensions 1 to 3.

Backed by qhull through :mod:`scipy.spatial`.  qhull triangulates facets,
so coplanar simplices are merged here with a threshold relative to the
point set's diameter.
"""
import numpy as np
from scipy.spatial import ConvexHull, Delaunay, QhullError

from .errors import DegenerateInputError


def affine_rank(P, tol=1e-12):
    P = np.asarray(P, dtype=float)
    if len(P) < 2:
        return 0
    D = P - P[0]
    s = np.linalg.svd(D, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def _hull(P):
    try:
        return ConvexHull(P)
    except QhullError as exc:
        raise DegenerateInputError(f"point set is not full-dimensional: {exc}") from None


def dedupe(P, tol=1e-13):
    P = np.asarray(P, dtype=float)
    if len(P) == 0:
        return P
    scale = max(1.0, float(np.max(np.abs(P))))
    key = np.round(P / (tol * scale * 16)).astype(np.int64)
    _, idx = np.unique(key, axis=0, return_index=True)
    return P[np.sort(idx)]


def extreme_points(P):
    """Vertices of conv(P); lower-dimensional sets are handled in their span."""
    P = dedupe(P)
    d = P.shape[1]
    if len(P) <= 2:
        return P
    r = affine_rank(P)
    if r == d:
        if d == 1:
            return np.array([P.min(axis=0), P.max(axis=0)])
        return P[_hull(P).vertices]
    if r == 0:
        return P[:1]
    # coordinates in the affine span
    c = P.mean(axis=0)
    _, _, Vt = np.linalg.svd(P - c)
    B = Vt[:r]
    Y = (P - c) @ B.T
    if r == 1:
        return P[[int(np.argmin(Y[:, 0])), int(np.argmax(Y[:, 0]))]]
    return P[_hull(Y).vertices]


def minkowski_sum(A, B):
    S = (np.asarray(A)[:, None, :] + np.asarray(B)[None, :, :]).reshape(-1, np.shape(A)[1])
    return extreme_points(S)


def facets(V, coplanar=1e-10):
    """Outer unit normals, offsets and (d-1)-areas of conv(V), d in 1..3.

    Facet i is {x : <normals[i], x> = offsets[i]}.
    """
    V = np.asarray(V, dtype=float)
    d = V.shape[1]
    if d == 1:
        lo, hi = float(V.min()), float(V.max())
        if hi - lo <= 0:
            raise DegenerateInputError("interval has zero length")
        return np.array([[1.0], [-1.0]]), np.array([hi, -lo]), np.array([1.0, 1.0])
    if d > 3:
        raise DegenerateInputError("facet enumeration is only available for d <= 3")
    h = _hull(V)
    diam = float(np.max(np.linalg.norm(V - V.mean(axis=0), axis=1))) * 2
    tol = coplanar * max(diam, 1e-300)
    eq = h.equations
    U, B = eq[:, :-1], -eq[:, -1]
    pts = V[h.simplices]
    if d == 2:
        A = np.linalg.norm(pts[:, 1] - pts[:, 0], axis=1)
    else:
        A = 0.5 * np.linalg.norm(np.cross(pts[:, 1] - pts[:, 0], pts[:, 2] - pts[:, 0]), axis=1)
    label = np.full(len(U), -1)
    for i in range(len(U)):
        if label[i] >= 0:
            continue
        same = (np.linalg.norm(U - U[i], axis=1) * diam <= tol * 10) & (np.abs(B - B[i]) <= tol) & (label < 0)
        label[same] = i
    keep = np.unique(label)
    areas = np.bincount(label, weights=A)[keep]
    return U[keep].copy(), B[keep].copy(), areas


def volume(V):
    V = np.asarray(V, dtype=float)
    if V.shape[1] == 1:
        return float(V.max() - V.min())
    return float(_hull(V).volume)


def centroid(V):
    """Centroid of conv(V) by simplex decomposition."""
    V = np.asarray(V, dtype=float)
    d = V.shape[1]
    if d == 1:
        return np.array([(V.max() + V.min()) / 2])
    tri = Delaunay(V)
    S = V[tri.simplices]
    vols = np.abs(np.linalg.det(S[:, 1:] - S[:, :1]))
    c = S.mean(axis=1)
    return (vols @ c) / vols.sum()


def halfspaces(V, coplanar=1e-10):
    """Normalized H-representation {x : A x <= 1} of conv(V); needs o interior."""
    u, b, _ = facets(V, coplanar)
    if np.any(b <= 0):
        raise DegenerateInputError("origin is not interior")
    return u / b[:, None]


def polygon_order(V):
    """Vertices of a convex polygon, counter-clockwise."""
    V = np.asarray(V, dtype=float)
    c = V.mean(axis=0)
    ang = np.arctan2(V[:, 1] - c[1], V[:, 0] - c[0])
    return V[np.argsort(ang, kind="stable")]


def polygon_area(P):
    x, y = P[:, 0], P[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
