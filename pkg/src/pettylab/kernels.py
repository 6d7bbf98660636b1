"""Hot loops.

Each kernel exists twice: an explicit loop compiled by numba (``*_loop``) and
a vectorized numpy version (``*_vec``).  The public wrappers dispatch on
:data:`pettylab._accel.USE_NUMBA`.  When numba is disabled the loop versions
are still importable (they run as plain Python), which is what the
benchmark compares against.

Shapes follow one convention: points of M[n,m] are ``(N, n, m)`` arrays,
directions of R^n are ``(K, n)``, and a body Q in R^{1×m} is passed either
as a vertex array ``qv`` of shape ``(r, m)`` or, when ``qball > 0``, as the
ball of that radius (``qv`` is then ignored).
"""
import numpy as np

from ._accel import USE_NUMBA, njit, prange

_CHUNK = 1 << 21  # element budget for the vectorized paths


# -- h_Q(u^t.x) sums -------------------------------------------------------

@njit
def _powp(h, p):
    # pow() dominates the inner loop; the common exponents skip it
    if p == 1.0:
        return h
    if p == 2.0:
        return h * h
    return h ** p



@njit(parallel=True)
def lp_sum_points_loop(X, U, w, qv, qball, p):
    """out[j] = sum_k w[k] * h_Q(U[k]^t . X[j])^p  (no root taken)."""
    N, n, m = X.shape
    K = U.shape[0]
    r = qv.shape[0]
    out = np.zeros(N)
    for j in prange(N):
        acc = 0.0
        y = np.empty(m)
        for k in range(K):
            for c in range(m):
                s = 0.0
                for i in range(n):
                    s += U[k, i] * X[j, i, c]
                y[c] = s
            if qball > 0.0:
                s = 0.0
                for c in range(m):
                    s += y[c] * y[c]
                h = qball * np.sqrt(s)
            else:
                h = 0.0
                for q in range(r):
                    s = 0.0
                    for c in range(m):
                        s += qv[q, c] * y[c]
                    if q == 0 or s > h:
                        h = s
                if h < 0.0:
                    h = 0.0
            if h > 0.0:
                acc += w[k] * _powp(h, p)
        out[j] = acc
    return out


@njit(parallel=True)
def lp_sum_dirs_loop(V, X, w, qv, qball, p):
    """out[a] = sum_b w[b] * h_Q(V[a]^t . X[b])^p  (no root taken)."""
    M, n = V.shape
    B = X.shape[0]
    m = X.shape[2]
    r = qv.shape[0]
    out = np.zeros(M)
    for a in prange(M):
        acc = 0.0
        y = np.empty(m)
        for b in range(B):
            for c in range(m):
                s = 0.0
                for i in range(n):
                    s += V[a, i] * X[b, i, c]
                y[c] = s
            if qball > 0.0:
                s = 0.0
                for c in range(m):
                    s += y[c] * y[c]
                h = qball * np.sqrt(s)
            else:
                h = 0.0
                for q in range(r):
                    s = 0.0
                    for c in range(m):
                        s += qv[q, c] * y[c]
                    if q == 0 or s > h:
                        h = s
                if h < 0.0:
                    h = 0.0
            if h > 0.0:
                acc += w[b] * _powp(h, p)
        out[a] = acc
    return out


def _hq_vec(Y, qv, qball):
    if qball > 0.0:
        return qball * np.sqrt(np.einsum("...c,...c->...", Y, Y))
    return np.maximum(np.max(Y @ qv.T, axis=-1), 0.0)


def lp_sum_points_vec(X, U, w, qv, qball, p):
    N = X.shape[0]
    K, m = U.shape[0], X.shape[2]
    step = max(1, _CHUNK // max(1, K * max(m, qv.shape[0])))
    out = np.empty(N)
    for s in range(0, N, step):
        Y = np.einsum("ki,jic->jkc", U, X[s:s + step])
        out[s:s + step] = _hq_vec(Y, qv, qball) ** p @ w
    return out


def lp_sum_dirs_vec(V, X, w, qv, qball, p):
    M = V.shape[0]
    B, m = X.shape[0], X.shape[2]
    step = max(1, _CHUNK // max(1, B * max(m, qv.shape[0])))
    out = np.empty(M)
    for s in range(0, M, step):
        Y = np.einsum("ai,bic->abc", V[s:s + step], X)
        out[s:s + step] = _hq_vec(Y, qv, qball) ** p @ w
    return out


def _prep(A):
    return np.ascontiguousarray(A, dtype=np.float64)


def lp_sum_points(X, U, w, qv, qball, p):
    args = (_prep(X), _prep(U), _prep(w), _prep(qv), float(qball), float(p))
    return lp_sum_points_loop(*args) if USE_NUMBA else lp_sum_points_vec(*args)


def lp_sum_dirs(V, X, w, qv, qball, p):
    args = (_prep(V), _prep(X), _prep(w), _prep(qv), float(qball), float(p))
    return lp_sum_dirs_loop(*args) if USE_NUMBA else lp_sum_dirs_vec(*args)


# -- max over finitely many points ------------------------------------------

@njit(parallel=True)
def max_pair_loop(V, X, qv, qball):
    """out[a] = max_b h_Q(V[a]^t . X[b])."""
    M, n = V.shape
    B = X.shape[0]
    m = X.shape[2]
    r = qv.shape[0]
    out = np.zeros(M)
    for a in prange(M):
        best = 0.0
        y = np.empty(m)
        for b in range(B):
            for c in range(m):
                s = 0.0
                for i in range(n):
                    s += V[a, i] * X[b, i, c]
                y[c] = s
            if qball > 0.0:
                s = 0.0
                for c in range(m):
                    s += y[c] * y[c]
                h = qball * np.sqrt(s)
            else:
                h = 0.0
                for q in range(r):
                    s = 0.0
                    for c in range(m):
                        s += qv[q, c] * y[c]
                    if s > h:
                        h = s
            if h > best:
                best = h
        out[a] = best
    return out


def max_pair_vec(V, X, qv, qball):
    M = V.shape[0]
    B, m = X.shape[0], X.shape[2]
    step = max(1, _CHUNK // max(1, B * max(m, qv.shape[0])))
    out = np.empty(M)
    for s in range(0, M, step):
        Y = np.einsum("ai,bic->abc", V[s:s + step], X)
        out[s:s + step] = np.max(_hq_vec(Y, qv, qball), axis=1)
    return out


def max_pair(V, X, qv, qball):
    args = (_prep(V), _prep(X), _prep(qv), float(qball))
    return max_pair_loop(*args) if USE_NUMBA else max_pair_vec(*args)


# -- operator norms on M[m,n] -----------------------------------------------

@njit(parallel=True)
def max_image_norm_loop(X, E):
    """out[j] = max_k |X[j] @ E[k]| for X (N,m,n), E (K,n)."""
    N, m, n = X.shape
    K = E.shape[0]
    out = np.zeros(N)
    for j in prange(N):
        best = 0.0
        for k in range(K):
            s = 0.0
            for a in range(m):
                t = 0.0
                for b in range(n):
                    t += X[j, a, b] * E[k, b]
                s += t * t
            if s > best:
                best = s
        out[j] = np.sqrt(best)
    return out


def max_image_norm_vec(X, E):
    N = X.shape[0]
    step = max(1, _CHUNK // max(1, E.shape[0] * X.shape[1]))
    out = np.empty(N)
    for s in range(0, N, step):
        Y = np.einsum("jab,kb->jka", X[s:s + step], E)
        out[s:s + step] = np.sqrt(np.max(np.einsum("jka,jka->jk", Y, Y), axis=1))
    return out


def max_image_norm(X, E):
    args = (_prep(X), _prep(E))
    return max_image_norm_loop(*args) if USE_NUMBA else max_image_norm_vec(*args)


@njit(parallel=True)
def spectral_norm_loop(X, tol, maxit):
    """Largest singular value of each X[j] by power iteration on X^t X."""
    N, a, b = X.shape
    out = np.zeros(N)
    for j in prange(N):
        G = np.zeros((b, b))
        for i in range(b):
            for k in range(b):
                s = 0.0
                for c in range(a):
                    s += X[j, c, i] * X[j, c, k]
                G[i, k] = s
        v = np.ones(b) / np.sqrt(b)
        # deterministic perturbation avoids starting orthogonal to the top vector
        for i in range(b):
            v[i] += 1e-3 * (i + 1)
        lam = 0.0
        for _ in range(maxit):
            u = G @ v
            nu = np.sqrt(np.sum(u * u))
            if nu == 0.0:
                lam = 0.0
                break
            u /= nu
            diff = abs(nu - lam)
            lam = nu
            v = u
            if diff <= tol * max(lam, 1e-300):
                break
        out[j] = np.sqrt(lam)
    return out


def spectral_norm_vec(X, tol, maxit):
    N, a, b = X.shape
    G = np.einsum("jci,jck->jik", X, X)
    v = np.ones((N, b)) / np.sqrt(b) + 1e-3 * np.arange(1, b + 1)
    lam = np.zeros(N)
    for _ in range(maxit):
        u = np.einsum("jik,jk->ji", G, v)
        nu = np.linalg.norm(u, axis=1)
        done = np.abs(nu - lam) <= tol * np.maximum(nu, 1e-300)
        lam = nu
        v = u / np.where(nu > 0, nu, 1.0)[:, None]
        if np.all(done):
            break
    return np.sqrt(lam)


def spectral_norm(X, tol=1e-12, maxit=10000):
    X = _prep(X)
    if USE_NUMBA:
        return spectral_norm_loop(X, float(tol), int(maxit))
    return spectral_norm_vec(X, float(tol), int(maxit))


# -- planar fibers cut out by half-planes -----------------------------------

@njit
def _clip(px, py, cnt, a0, a1, b, qx, qy):
    """Clip polygon (px,py)[:cnt] by a0*x + a1*y <= b into (qx,qy)."""
    out = 0
    for i in range(cnt):
        j = (i + 1) % cnt
        si = a0 * px[i] + a1 * py[i] - b
        sj = a0 * px[j] + a1 * py[j] - b
        if si <= 0.0:
            qx[out] = px[i]
            qy[out] = py[i]
            out += 1
        if (si < 0.0 and sj > 0.0) or (si > 0.0 and sj < 0.0):
            t = si / (si - sj)
            qx[out] = px[i] + t * (px[j] - px[i])
            qy[out] = py[i] + t * (py[j] - py[i])
            out += 1
    return out


@njit(parallel=True)
def fiber_polygons_loop(C, D, R, box):
    """Fibers {t in R^2 : C[i].t <= D[j,i]} and their central symmetrals.

    Returns (member, area, sym_area): ``member[j]`` says whether ``R[j]``
    lies in (P_j - P_j)/2, ``area`` is |P_j| and ``sym_area`` is
    |(P_j - P_j)/2|.  ``box`` bounds every fiber (half-width of a square).
    """
    N = D.shape[0]
    K = C.shape[0]
    cap = K + 8
    member = np.zeros(N, dtype=np.bool_)
    area = np.zeros(N)
    sym_area = np.zeros(N)
    for j in prange(N):
        px = np.empty(cap)
        py = np.empty(cap)
        qx = np.empty(cap)
        qy = np.empty(cap)
        px[0] = -box
        py[0] = -box
        px[1] = box
        py[1] = -box
        px[2] = box
        py[2] = box
        px[3] = -box
        py[3] = box
        cnt = 4
        for i in range(K):
            cnt = _clip(px, py, cnt, C[i, 0], C[i, 1], D[j, i], qx, qy)
            for k in range(cnt):
                px[k] = qx[k]
                py[k] = qy[k]
            if cnt == 0:
                break
        if cnt < 3:
            continue
        A = 0.0
        for k in range(cnt):
            l = (k + 1) % cnt
            A += px[k] * py[l] - px[l] * py[k]
        A *= 0.5
        if A <= 0.0:
            continue
        area[j] = A
        # mixed area with the reflection gives |(P-P)/2| = A/2 + V(P,-P)/2
        mixed = 0.0
        ok = True
        for k in range(cnt):
            l = (k + 1) % cnt
            ex = px[l] - px[k]
            ey = py[l] - py[k]
            le = np.sqrt(ex * ex + ey * ey)
            if le == 0.0:
                continue
            ux = ey / le
            uy = -ex / le
            hp = -1e300
            hm = -1e300
            for q in range(cnt):
                s = ux * px[q] + uy * py[q]
                if s > hp:
                    hp = s
                if -s > hm:
                    hm = -s
            mixed += 0.5 * hm * le
            width = hp + hm
            s = ux * R[j, 0] + uy * R[j, 1]
            if 2.0 * abs(s) > width:
                ok = False
        sym_area[j] = 0.5 * A + 0.5 * mixed
        member[j] = ok
    return member, area, sym_area


def fiber_polygons(C, D, R, box):
    # no vectorized variant: clipping is inherently sequential per fiber
    return fiber_polygons_loop(_prep(C), _prep(D), _prep(R), float(box))
