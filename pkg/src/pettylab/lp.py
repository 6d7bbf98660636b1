"""Small dense linear programs.

A two-phase tableau simplex with Bland's rule.  The problems met in this
library have at most a few dozen constraints and variables (polytope gauges,
supports of H-polytopes, projection polishing), so a dense tableau is the
simplest thing that is exact enough and never cycles.
"""
from dataclasses import dataclass

import numpy as np

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass
class LPResult:
    status: str
    x: np.ndarray | None
    fun: float


def _pivot(T, r, c):
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _simplex(T, basis, ncols, tol):
    """Minimize the objective stored in the last row of T (reduced costs).

    Only the first ``ncols`` columns may enter.  Returns False if unbounded.
    """
    m = T.shape[0] - 1
    while True:
        cost = T[-1, :ncols]
        enter = -1
        for j in range(ncols):  # Bland: smallest index with negative reduced cost
            if cost[j] < -tol:
                enter = j
                break
        if enter < 0:
            return True
        col = T[:m, enter]
        best, leave = np.inf, -1
        for i in range(m):
            if col[i] > tol:
                ratio = T[i, -1] / col[i]
                if ratio < best - tol or (abs(ratio - best) <= tol and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave < 0:
            return False
        _pivot(T, leave, enter)
        basis[leave] = enter


def solve_standard(c, A, b, tol=1e-10):
    """min c.x  s.t.  A x = b, x >= 0."""
    A = np.array(A, dtype=float, ndmin=2)
    b = np.array(b, dtype=float).ravel()
    c = np.array(c, dtype=float).ravel()
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0
    scale = max(1.0, float(np.max(np.abs(A))) if A.size else 1.0)

    # phase I: artificials in columns n..n+m-1
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(n, n + m))
    _simplex(T, basis, n + m, tol * scale)
    if -T[-1, -1] > tol * scale * max(1.0, float(np.abs(b).sum())) * 10:
        return LPResult(INFEASIBLE, None, np.inf)

    # drive remaining artificials out of the basis
    keep = []
    for i in range(m):
        if basis[i] >= n:
            row = T[i, :n]
            j = next((j for j in range(n) if abs(row[j]) > tol * scale), -1)
            if j < 0:
                continue  # redundant equality
            _pivot(T, i, j)
            basis[i] = j
        keep.append(i)
    T = np.vstack([T[keep][:, list(range(n)) + [T.shape[1] - 1]], np.zeros((1, n + 1))])
    basis = [basis[i] for i in keep]

    # phase II
    T[-1, :n] = c
    for i, j in enumerate(basis):
        T[-1] -= c[j] * T[i]
    if not _simplex(T, basis, n, tol * scale):
        return LPResult(UNBOUNDED, None, -np.inf)
    x = np.zeros(n)
    for i, j in enumerate(basis):
        x[j] = T[i, -1]
    return LPResult(OPTIMAL, x, float(c @ x))


def solve(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, free=None, tol=1e-10):
    """min c.x subject to A_ub x <= b_ub, A_eq x = b_eq, x_j >= 0 unless free[j].

    Free variables are split as x = x+ - x-, inequalities get slacks.
    """
    c = np.asarray(c, dtype=float).ravel()
    n = c.size
    free = np.zeros(n, bool) if free is None else np.asarray(free, bool)
    if free.shape == ():
        free = np.full(n, bool(free))
    cols = [np.eye(n)[:, j] for j in range(n)] + [-np.eye(n)[:, j] for j in np.flatnonzero(free)]
    E = np.array(cols).T  # x = E z, z >= 0
    blocks, rhs = [], []
    nub = 0
    if A_ub is not None and len(A_ub):
        A_ub = np.array(A_ub, dtype=float, ndmin=2)
        nub = A_ub.shape[0]
        blocks.append(np.hstack([A_ub @ E, np.eye(nub)]))
        rhs.append(np.asarray(b_ub, dtype=float).ravel())
    if A_eq is not None and len(A_eq):
        A_eq = np.array(A_eq, dtype=float, ndmin=2)
        blocks.append(np.hstack([A_eq @ E, np.zeros((A_eq.shape[0], nub))]))
        rhs.append(np.asarray(b_eq, dtype=float).ravel())
    if not blocks:
        raise ValueError("LP needs at least one constraint")
    A = np.vstack(blocks)
    b = np.concatenate(rhs)
    cz = np.concatenate([c @ E, np.zeros(nub)])
    res = solve_standard(cz, A, b, tol)
    if res.status != OPTIMAL:
        return res
    x = E @ res.x[:E.shape[1]]
    return LPResult(OPTIMAL, x, float(c @ x))


def polytope_gauge(V, x, tol=1e-10):
    """min sum(mu) s.t. V^t mu = x, mu >= 0; infinity when infeasible."""
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        return 0.0
    V = np.asarray(V, dtype=float)
    res = solve_standard(np.ones(V.shape[0]), V.T, x, tol)
    if res.status != OPTIMAL:
        return np.inf
    return max(res.fun, 0.0)


def hpolytope_support(A, x, tol=1e-10):
    """max <x, y> s.t. A y <= 1; infinity when unbounded."""
    A = np.asarray(A, dtype=float)
    res = solve(-np.asarray(x, dtype=float), A_ub=A, b_ub=np.ones(A.shape[0]), free=True, tol=tol)
    if res.status == UNBOUNDED:
        return np.inf
    if res.status != OPTIMAL:
        raise ValueError("empty H-polytope")
    return max(-res.fun, 0.0)
