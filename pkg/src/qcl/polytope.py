"""Convex polytopes in V-representation, computed inside their affine hulls.

Everything runs at a tolerance: membership is decided by a linear program
whose optimum is the smallest L1 residual of a convex combination, and
intersections go through facet form (double description) restricted to the
intersection of the operands' affine hulls.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import dd, lp
from .config import tol as _tol
from .errors import DimensionError, NotAMemberError


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    """``point + span(basis columns)``; the columns are orthonormal."""

    point: np.ndarray
    basis: np.ndarray

    @property
    def ambient_dim(self) -> int:
        return self.point.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def local(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.point) @ self.basis

    def lift(self, y) -> np.ndarray:
        return self.point + np.asarray(y, dtype=float) @ self.basis.T

    def residual(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(np.linalg.norm(x - self.lift(self.local(x))))

    def contains(self, x, tol: float | None = None) -> bool:
        return self.residual(x) <= (_tol("lp") if tol is None else tol)

    @classmethod
    def from_spanning(cls, point, directions, eps: float | None = None) -> "AffineSubspace":
        point = np.asarray(point, dtype=float)
        directions = np.asarray(directions, dtype=float).reshape(-1, point.shape[0])
        eps = _tol("rank") if eps is None else eps
        if directions.shape[0] == 0:
            return cls(point, np.zeros((point.shape[0], 0)))
        _, s, vt = np.linalg.svd(directions, full_matrices=False)
        return cls(point, vt[s > eps].T)


@dataclass(frozen=True, eq=False)
class VPolytope:
    """Convex hull of the rows of ``vertices``; zero rows is the empty polytope."""

    ambient_dim: int
    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float).reshape(-1, self.ambient_dim)
        object.__setattr__(self, "vertices", v)

    @property
    def is_empty(self) -> bool:
        return self.vertices.shape[0] == 0

    def __len__(self):
        return self.vertices.shape[0]

    @functools.cached_property
    def hull(self) -> AffineSubspace:
        return affine_hull(self)

    @functools.cached_property
    def local_vertices(self) -> np.ndarray:
        return self.hull.local(self.vertices)

    @functools.cached_property
    def facets(self) -> tuple[np.ndarray, np.ndarray]:
        """``(normals, offsets)`` with ``normals @ y + offsets >= 0`` in hull coordinates."""
        if self.hull.dim == 0:
            return np.zeros((0, 0)), np.zeros(0)
        return dd.facets(self.local_vertices)

    def __repr__(self):
        return f"VPolytope(ambient_dim={self.ambient_dim}, n_vertices={len(self)})"


def empty_polytope(ambient_dim: int) -> VPolytope:
    return VPolytope(ambient_dim, np.zeros((0, ambient_dim)))


def _check_dims(P: VPolytope, Q: VPolytope) -> None:
    if P.ambient_dim != Q.ambient_dim:
        raise DimensionError(f"ambient dimensions differ: {P.ambient_dim} vs {Q.ambient_dim}")


def affine_hull(P: VPolytope) -> AffineSubspace:
    if P.is_empty:
        raise ValueError("the empty polytope has no affine hull")
    v = P.vertices
    centre = v.mean(axis=0)
    return AffineSubspace.from_spanning(centre, v - centre)


def _local_contains(points: np.ndarray, y: np.ndarray, tol: float) -> bool:
    if points.shape[1] == 0:
        return True
    if points.shape[0] == 1:
        return float(np.abs(points[0] - y).sum()) <= tol
    res, _ = lp.min_l1_residual(points, y)
    return res <= tol


def contains(P: VPolytope, x, tol: float | None = None) -> bool:
    """Whether ``x`` is a convex combination of the vertices of ``P`` within ``tol``."""
    tol = _tol("lp") if tol is None else tol
    x = np.asarray(x, dtype=float)
    if x.shape != (P.ambient_dim,):
        raise DimensionError(f"point has shape {x.shape}, polytope lives in R^{P.ambient_dim}")
    if P.is_empty:
        return False
    if P.hull.residual(x) > tol:
        return False
    return _local_contains(P.local_vertices, P.hull.local(x), tol)


def _dedup(points: np.ndarray, tol: float) -> np.ndarray:
    out: list[np.ndarray] = []
    for p in points:
        if not any(np.abs(p - q).max() <= tol for q in out):
            out.append(p)
    return np.array(out).reshape(-1, points.shape[1])


def canonicalize(points, tol: float | None = None, ambient_dim: int | None = None) -> VPolytope:
    """Keep only the extreme points of ``conv(points)``."""
    tol = _tol("lp") if tol is None else tol
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        if ambient_dim is None:
            ambient_dim = points.shape[-1] if points.ndim == 2 else 0
        return empty_polytope(ambient_dim)
    points = np.atleast_2d(points)
    pts = _dedup(points, tol)
    P = VPolytope(points.shape[1], pts)
    if len(pts) <= 2:
        return P
    Y = P.local_vertices
    k = Y.shape[1]
    # points maximising a generic linear functional are extreme; skip their LPs
    extreme = np.zeros(len(Y), dtype=bool)
    rng = np.random.default_rng(len(Y) * 7919 + k)
    for direction in rng.normal(size=(4 * k + 4, k)):
        vals = Y @ direction
        order = np.argsort(vals)
        if vals[order[-1]] - vals[order[-2]] > 1e-7:
            extreme[order[-1]] = True
    keep = list(range(len(Y)))
    for i in range(len(Y)):
        if extreme[i]:
            continue
        others = [j for j in keep if j != i]
        if others and _local_contains(Y[others], Y[i], tol):
            keep.remove(i)
    return VPolytope(P.ambient_dim, pts[keep])


def hull_union(P: VPolytope, Q: VPolytope, tol: float | None = None) -> VPolytope:
    _check_dims(P, Q)
    if P.is_empty:
        return Q
    if Q.is_empty:
        return P
    return canonicalize(np.vstack([P.vertices, Q.vertices]), tol)


def intersect_flats(A: AffineSubspace, B: AffineSubspace, tol: float | None = None) -> AffineSubspace | None:
    """Intersection of two affine subspaces, or ``None`` when they miss each other."""
    tol = _tol("lp") if tol is None else tol
    if A.ambient_dim != B.ambient_dim:
        raise DimensionError("ambient dimensions differ")
    M = np.hstack([A.basis, -B.basis])
    rhs = B.point - A.point
    if M.shape[1] == 0:
        return A if np.linalg.norm(rhs) <= tol else None
    u, s, vt = np.linalg.svd(M, full_matrices=True)
    rank = int(np.sum(s > _tol("rank")))
    sol = vt[:rank].T @ ((u[:, :rank].T @ rhs) / s[:rank])
    if np.linalg.norm(M @ sol - rhs) > tol:
        return None
    point = A.point + A.basis @ sol[: A.dim]
    null = vt[rank:].T
    dirs = (A.basis @ null[: A.dim]).T
    return AffineSubspace.from_spanning(point, dirs)


def _restricted_constraints(P: VPolytope, F: AffineSubspace) -> tuple[np.ndarray, np.ndarray]:
    normals, offsets = P.facets
    if normals.shape[0] == 0:
        return np.zeros((0, F.dim)), np.zeros(0)
    H = P.hull
    shift = H.local(F.point)
    to_local = H.basis.T @ F.basis  # (k_P, k_F)
    return normals @ to_local, offsets + normals @ shift


def _enumerate(F: AffineSubspace, normals: np.ndarray, offsets: np.ndarray, tol: float) -> VPolytope:
    ambient = F.ambient_dim
    if F.dim == 0:
        if np.all(offsets >= -tol):
            return VPolytope(ambient, F.point[None, :])
        return empty_polytope(ambient)
    norms = np.linalg.norm(normals, axis=1)
    flat = norms < 1e-8
    if np.any(offsets[flat] < -tol):
        return empty_polytope(ambient)
    normals, offsets = normals[~flat], offsets[~flat]
    if normals.shape[0] == 0:
        raise ValueError("unbounded restriction: no constraint survives")
    local = dd.vertices(normals, offsets)
    if local.shape[0] == 0:
        return empty_polytope(ambient)
    return canonicalize(F.lift(local), tol)


def intersect(P: VPolytope, Q: VPolytope, tol: float | None = None) -> VPolytope:
    """V-representation of ``P ∩ Q`` (empty polytope when disjoint)."""
    _check_dims(P, Q)
    tol = _tol("lp") if tol is None else tol
    if P.is_empty or Q.is_empty:
        return empty_polytope(P.ambient_dim)
    F = intersect_flats(P.hull, Q.hull, tol)
    if F is None:
        return empty_polytope(P.ambient_dim)
    n1, o1 = _restricted_constraints(P, F)
    n2, o2 = _restricted_constraints(Q, F)
    return _enumerate(F, np.vstack([n1, n2]), np.concatenate([o1, o2]), tol)


def intersect_affine(P: VPolytope, A: AffineSubspace, tol: float | None = None) -> VPolytope:
    """V-representation of ``P ∩ A``."""
    if P.ambient_dim != A.ambient_dim:
        raise DimensionError("ambient dimensions differ")
    tol = _tol("lp") if tol is None else tol
    if P.is_empty:
        return P
    F = intersect_flats(P.hull, A, tol)
    if F is None:
        return empty_polytope(P.ambient_dim)
    n1, o1 = _restricted_constraints(P, F)
    return _enumerate(F, n1, o1, tol)


def subset(P: VPolytope, Q: VPolytope, tol: float | None = None) -> bool:
    _check_dims(P, Q)
    return all(contains(Q, v, tol) for v in P.vertices)


def equal(P: VPolytope, Q: VPolytope, tol: float | None = None) -> bool:
    return subset(P, Q, tol) and subset(Q, P, tol)


def carath_decompose(P: VPolytope, x, tol: float | None = None) -> list[tuple[float, np.ndarray]]:
    """Write ``x`` as a convex combination of at most ``dim(hull) + 1`` vertices."""
    tol = _tol("lp") if tol is None else tol
    x = np.asarray(x, dtype=float)
    if not contains(P, x, tol):
        raise NotAMemberError("point is not in the polytope")
    Y = P.local_vertices
    if Y.shape[1] == 0:
        return [(1.0, P.vertices[0])]
    _, w = lp.min_l1_residual(Y, P.hull.local(x))
    idx = np.flatnonzero(w > 1e-14)
    w = w[idx]
    while True:
        M = np.vstack([Y[idx].T, np.ones(len(idx))])
        _, s, vt = np.linalg.svd(M)
        rank = int(np.sum(s > 1e-10))
        if len(idx) <= rank:
            break
        v = vt[-1]
        if not np.any(v > 1e-14):
            v = -v
        pos = v > 1e-14
        t = np.min(w[pos] / v[pos])
        w = w - t * v
        alive = w > 1e-14
        idx, w = idx[alive], w[alive]
    w = w / w.sum()
    return [(float(wi), P.vertices[i]) for wi, i in zip(w, idx)]


def distance(P: VPolytope, x) -> float:
    """Smallest L1 distance from ``x`` to a convex combination of the vertices of ``P``."""
    x = np.asarray(x, dtype=float)
    if P.is_empty:
        return np.inf
    res, _ = lp.min_l1_residual(P.vertices, x)
    return float(res)


def set_residual(P: VPolytope, Q: VPolytope) -> float:
    """Largest vertex distance of either polytope from the other (zero iff equal)."""
    _check_dims(P, Q)
    if P.is_empty or Q.is_empty:
        return 0.0 if P.is_empty and Q.is_empty else np.inf
    return max(max(distance(Q, v) for v in P.vertices), max(distance(P, w) for w in Q.vertices))
