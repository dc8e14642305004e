"""Dense primal simplex for small linear programs.

Solves ``min c @ x  s.t.  A @ x == b, x >= 0`` on a full tableau.  Pivoting
uses Dantzig's most-negative reduced cost until a run of degenerate pivots
appears, then switches permanently to Bland's smallest-index rule, which
cannot cycle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"

_PIVOT_EPS = 1e-11
_DEGENERATE_RUN = 8


@dataclass
class LPResult:
    status: str
    x: np.ndarray | None
    objective: float

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def _pivot(T: np.ndarray, r: int, c: int) -> None:
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _iterate(T: np.ndarray, basis: list[int], ncols: int, max_iter: int) -> str:
    bland = False
    degenerate = 0
    m = len(basis)
    for _ in range(max_iter):
        rc = T[-1, :ncols]
        if bland:
            cand = np.flatnonzero(rc < -_PIVOT_EPS)
            if cand.size == 0:
                return OPTIMAL
            e = int(cand[0])
        else:
            e = int(np.argmin(rc))
            if rc[e] >= -_PIVOT_EPS:
                return OPTIMAL
        col = T[:m, e]
        rows = np.flatnonzero(col > _PIVOT_EPS)
        if rows.size == 0:
            return UNBOUNDED
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        r = int(min(ties, key=lambda i: basis[i]))
        if best <= 1e-12:
            degenerate += 1
            if degenerate >= _DEGENERATE_RUN:
                bland = True
        else:
            degenerate = 0
        _pivot(T, r, e)
        basis[r] = e
    return ITERATION_LIMIT


def solve(c, A, b, basis: list[int] | None = None, max_iter: int = 5000) -> LPResult:
    """Minimise ``c @ x`` subject to ``A @ x == b`` and ``x >= 0``.

    ``basis`` may name a feasible starting basis (one column index per row,
    the submatrix being a permutation of the identity with ``b >= 0``); phase
    one is then skipped.
    """
    c = np.asarray(c, dtype=float)
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    m, n = A.shape

    if basis is None:
        flip = b < 0
        A[flip] *= -1
        b[flip] *= -1
        # phase one over [x, artificials]
        T = np.zeros((m + 1, n + m + 1))
        T[:m, :n] = A
        T[:m, n:n + m] = np.eye(m)
        T[:m, -1] = b
        T[-1, :n] = -A.sum(axis=0)
        T[-1, -1] = -b.sum()
        basis = list(range(n, n + m))
        status = _iterate(T, basis, n + m, max_iter)
        if status != OPTIMAL:
            return LPResult(status, None, np.nan)
        if -T[-1, -1] > 1e-9 * max(1.0, np.abs(b).sum()):
            return LPResult(INFEASIBLE, None, np.nan)
        # drive artificials out of the basis where possible
        for r, j in enumerate(basis):
            if j >= n:
                nz = np.flatnonzero(np.abs(T[r, :n]) > 1e-9)
                if nz.size:
                    _pivot(T, r, int(nz[0]))
                    basis[r] = int(nz[0])
        keep = [r for r, j in enumerate(basis) if j < n]
        T = np.vstack([T[keep][:, list(range(n)) + [n + m]], np.zeros((1, n + 1))])
        basis = [basis[r] for r in keep]
    else:
        basis = list(basis)
        T = np.zeros((m + 1, n + 1))
        T[:m, :n] = A
        T[:m, -1] = b
        if np.any(b < -1e-12):
            raise ValueError("starting basis is not feasible")
        # bring the supplied basis to identity form
        for r, j in enumerate(basis):
            _pivot(T, r, j)

    # phase two objective row: c - c_B B^-1 A
    T[-1, :n] = c
    T[-1, -1] = 0.0
    for r, j in enumerate(basis):
        if c[j] != 0:
            T[-1] -= c[j] * T[r]
    status = _iterate(T, basis, n, max_iter)
    if status != OPTIMAL:
        return LPResult(status, None, np.nan)
    x = np.zeros(n)
    for r, j in enumerate(basis):
        x[j] = max(T[r, -1], 0.0)
    return LPResult(OPTIMAL, x, float(c @ x))


def min_l1_residual(points: np.ndarray, target: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest ``||sum_i w_i p_i - target||_1`` over convex weights ``w``.

    ``points`` has one point per row.  Returns the residual and the weights.
    """
    points = np.asarray(points, dtype=float)
    target = np.asarray(target, dtype=float)
    n, k = points.shape
    m = k + 1
    A = np.zeros((m, n + 2 * m))
    A[:k, :n] = points.T
    A[k, :n] = 1.0
    A[:, n:n + m] = np.eye(m)
    A[:, n + m:] = -np.eye(m)
    b = np.append(target, 1.0)
    cost = np.concatenate([np.zeros(n), np.ones(2 * m)])
    basis = [n + i if b[i] >= 0 else n + m + i for i in range(m)]
    # rows with negative rhs start on the s- column; flip their sign
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1
    res = solve(cost, A, b, basis=basis)
    if not res.ok:  # pragma: no cover - bounded below by zero, always feasible
        raise RuntimeError(f"residual LP failed: {res.status}")
    return res.objective, res.x[:n]
