"""Double-description method for pointed polyhedral cones.

:func:`extreme_rays` converts ``{x : A x >= 0}`` into its extreme rays.  The
same routine serves both directions of the polytope conversion: facets of
``conv(V)`` are the extreme rays of the dual cone spanned by ``(1, v)``, and
vertices of ``{y : a_j . y + b_j >= 0}`` are the rays of the homogenised cone
with positive first coordinate.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

ZERO_TOL = 1e-9


def _normalise_rows(a: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(a, axis=1)
    return a / norms[:, None]


def extreme_rays(A: np.ndarray, tol: float = ZERO_TOL) -> np.ndarray:
    """Extreme rays (unit rows) of the pointed cone ``{x : A @ x >= 0}``.

    Raises ``ValueError`` when ``A`` does not have full column rank, i.e. the
    cone contains a line.
    """
    A = np.asarray(A, dtype=float)
    A = A[np.linalg.norm(A, axis=1) > 1e-12]
    m, n = A.shape if A.ndim == 2 else (0, 0)
    if m < n or n == 0:
        raise ValueError("cone is not pointed")
    A = _normalise_rows(A)

    _, r, piv = scipy.linalg.qr(A.T, pivoting=True, mode="economic")
    if abs(r[n - 1, n - 1]) < 1e-10:
        raise ValueError("cone is not pointed")
    start = piv[:n]
    rays = np.linalg.inv(A[start]).T
    rays = _normalise_rows(rays)
    # zero[k, j]: ray k lies on hyperplane j (only for processed j)
    zero = np.zeros((n, m), dtype=bool)
    for k in range(n):
        zero[k, start] = True
        zero[k, start[k]] = False

    pending = [j for j in range(m) if j not in set(start.tolist())]
    for j in pending:
        if rays.shape[0] == 0:
            break
        vals = rays @ A[j]
        pos = np.flatnonzero(vals > tol)
        neg = np.flatnonzero(vals < -tol)
        zer = np.flatnonzero(np.abs(vals) <= tol)
        if neg.size == 0:
            zero[:, j] = np.abs(vals) <= tol
            continue

        new_rays = []
        new_zero = []
        if pos.size:
            need = n - 2
            for p in pos:
                common = zero[p] & zero[neg]  # (len(neg), m)
                counts = common.sum(axis=1)
                for idx in np.flatnonzero(counts >= need):
                    q = neg[idx]
                    c = common[idx]
                    # combinatorial adjacency: no third ray tight on all of c
                    covering = zero[:, c].all(axis=1)
                    covering[p] = covering[q] = False
                    if covering.any():
                        continue
                    ray = vals[p] * rays[q] - vals[q] * rays[p]
                    nrm = np.linalg.norm(ray)
                    if nrm < 1e-14:
                        continue
                    new_rays.append(ray / nrm)
                    z = c.copy()
                    z[j] = True
                    new_zero.append(z)

        keep = np.concatenate([pos, zer])
        kept_zero = zero[keep]
        kept_zero[:, j] = np.abs(vals[keep]) <= tol
        rays = np.vstack([rays[keep]] + ([np.array(new_rays)] if new_rays else []))
        zero = np.vstack([kept_zero] + ([np.array(new_zero)] if new_zero else []))
    return rays


def facets(points: np.ndarray, tol: float = ZERO_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Facet inequalities ``normals @ y + offsets >= 0`` of a full-dimensional hull.

    ``points`` is ``(n, k)`` with affinely spanning rows, ``k >= 1``.
    """
    points = np.asarray(points, dtype=float)
    n, k = points.shape
    dual = np.hstack([np.ones((n, 1)), points])
    rays = extreme_rays(dual, tol)
    return rays[:, 1:], rays[:, 0]


def vertices(normals: np.ndarray, offsets: np.ndarray, tol: float = ZERO_TOL) -> np.ndarray:
    """Vertices of the bounded polyhedron ``{y : normals @ y + offsets >= 0}``."""
    normals = np.asarray(normals, dtype=float)
    offsets = np.asarray(offsets, dtype=float)
    k = normals.shape[1]
    rows = np.vstack([np.hstack([offsets[:, None], normals]), np.eye(1, k + 1)])
    rays = extreme_rays(rows, tol)
    if rays.size == 0:
        return np.zeros((0, k))
    t = rays[:, 0]
    good = t > 1e-7
    return rays[good, 1:] / t[good, None]
