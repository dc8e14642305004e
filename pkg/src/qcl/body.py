"""Convex bodies of states: the lattice of convex subsets of the state space.

A body is one of a small set of representations.  Exact kinds are
:class:`Empty`, :class:`Full`, :class:`VPoly` (hull of finitely many states),
:class:`SpecSection` (affine subspace intersected with the state space) and
:class:`Face` (states supported in a projection).  Operations without a finite
representation produce lazy nodes whose membership is decided by a conic
feasibility problem.

Membership of lazy bodies is not exact; :func:`member_verdict` reports whether
a verdict came from an exact test, a feasibility certificate, or an
inconclusive solve (counted as non-member).
"""
from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from . import conic, interior
from . import polytope as pt
from .config import tol as _tol
from .errors import DimensionError, InconclusiveError, NeedsWitnessError, UnsupportedBodyError
from .hermitian import (
    BipartiteShape,
    as_shape,
    check_density,
    compression_matrix,
    dim_of,
    from_coords,
    from_coords_many,
    hermitian_part,
    map_matrix,
    orthonormal_rows,
    partial_trace,
    partial_trace_matrix,
    partial_transpose,
    partial_transpose_matrix,
    proj_join,
    proj_meet,
    projection_rank,
    range_basis,
    support_projection,
    tensor,
    tensor_left_matrix,
    tensor_right_matrix,
    to_coords,
    to_coords_many,
    trace_coords,
    von_neumann_entropy,
)
from .sampling import random_state, rng_from

PROBES = 200
SAMPLES = 60


class InconclusiveMembershipWarning(UserWarning):
    pass


class Body:
    kind: ClassVar[str]
    d: int

    @property
    def lazy(self) -> bool:
        return False

    def __repr__(self):
        return f"{type(self).__name__}(d={self.d})"


@dataclass(frozen=True, eq=False, repr=False)
class Empty(Body):
    d: int
    kind: ClassVar[str] = "empty"


@dataclass(frozen=True, eq=False, repr=False)
class Full(Body):
    d: int
    kind: ClassVar[str] = "full"


@dataclass(frozen=True, eq=False, repr=False)
class VPoly(Body):
    d: int
    poly: pt.VPolytope
    kind: ClassVar[str] = "vpoly"

    @functools.cached_property
    def generators(self) -> np.ndarray:
        return from_coords_many(self.poly.vertices)

    def __repr__(self):
        return f"VPoly(d={self.d}, n_generators={len(self.poly)})"


@dataclass(frozen=True, eq=False, repr=False)
class SpecSection(Body):
    """``(point + span(dirs)) ∩ states``; ``point`` has trace one, ``dirs`` are traceless."""

    d: int
    point: np.ndarray
    dirs: np.ndarray
    witness: tuple | None = None
    kind: ClassVar[str] = "spec"

    @functools.cached_property
    def affine(self) -> pt.AffineSubspace:
        return pt.AffineSubspace(self.point, self.dirs.T)

    @functools.cached_property
    def span_rows(self) -> np.ndarray:
        return orthonormal_rows(np.vstack([self.point[None, :], self.dirs]))

    def __repr__(self):
        w = "none" if self.witness is None else len(self.witness)
        return f"SpecSection(d={self.d}, dim={self.dirs.shape[0]}, witness={w})"


@dataclass(frozen=True, eq=False, repr=False)
class Face(Body):
    d: int
    proj: np.ndarray
    kind: ClassVar[str] = "face"

    @functools.cached_property
    def rank(self) -> int:
        return projection_rank(self.proj)

    @functools.cached_property
    def compression(self) -> np.ndarray:
        return compression_matrix(self.proj)

    @functools.cached_property
    def affine(self) -> pt.AffineSubspace:
        v = range_basis(self.proj)
        r = v.shape[1]
        emb = map_matrix(lambda b: v @ b @ v.conj().T, r)
        return pt.AffineSubspace(to_coords(self.proj / r), emb[:, 1:])

    def __repr__(self):
        return f"Face(d={self.d}, rank={self.rank})"


@dataclass(frozen=True, eq=False, repr=False)
class JoinNode(Body):
    d: int
    left: Body
    right: Body
    kind: ClassVar[str] = "join"

    @property
    def lazy(self) -> bool:
        return True


@dataclass(frozen=True, eq=False, repr=False)
class MeetNode(Body):
    d: int
    left: Body
    right: Body
    kind: ClassVar[str] = "meet"

    @property
    def lazy(self) -> bool:
        return True


@dataclass(frozen=True, eq=False, repr=False)
class PreimageNode(Body):
    """States whose reduction to factor ``side`` lies in ``child``."""

    shape: BipartiteShape
    side: int
    child: Body
    kind: ClassVar[str] = "preimage"

    @property
    def d(self) -> int:
        return self.shape.d

    @property
    def lazy(self) -> bool:
        return True

    def __repr__(self):
        return f"PreimageNode(shape={self.shape}, side={self.side}, child={self.child!r})"


@dataclass(frozen=True, eq=False, repr=False)
class ProjectedNode(Body):
    """Image of ``child`` (a body on the product) under the partial trace onto ``side``."""

    shape: BipartiteShape
    side: int
    child: Body
    kind: ClassVar[str] = "projected"

    @property
    def d(self) -> int:
        return self.shape.factor(self.side)

    @property
    def lazy(self) -> bool:
        return True


@dataclass(frozen=True, eq=False, repr=False)
class TensorNode(Body):
    """``conv(left ⊗ right)`` where at least one factor is a :class:`VPoly`."""

    shape: BipartiteShape
    left: Body
    right: Body
    kind: ClassVar[str] = "tensor"

    @property
    def d(self) -> int:
        return self.shape.d

    @property
    def lazy(self) -> bool:
        return True


@dataclass(frozen=True, eq=False, repr=False)
class SeparableNode(Body):
    """Separable states supported in ``p1 ⊗ p2``; the whole separable set when both are identities.

    Membership is the PPT test, exact when the support ranks multiply to at most 6.
    """

    shape: BipartiteShape
    p1: np.ndarray
    p2: np.ndarray
    kind: ClassVar[str] = "separable"

    @property
    def d(self) -> int:
        return self.shape.d

    @property
    def lazy(self) -> bool:
        return True

    @property
    def exact(self) -> bool:
        return projection_rank(self.p1) * projection_rank(self.p2) <= 6


# ---------------------------------------------------------------------------
# constructors


def empty(d: int) -> Empty:
    return Empty(d)


def full(d: int) -> Full:
    return Full(d)


def _from_polytope(d: int, poly: pt.VPolytope) -> Body:
    if poly.is_empty:
        return Empty(d)
    return VPoly(d, poly)


def vpoly(states, tol: float | None = None) -> Body:
    """Convex hull of a non-empty list of density matrices."""
    states = [check_density(s) for s in states]
    if not states:
        raise ValueError("vpoly needs at least one state")
    d = states[0].shape[0]
    if any(s.shape != (d, d) for s in states):
        raise DimensionError("generators have different dimensions")
    return _from_polytope(d, pt.canonicalize(to_coords_many(states), tol))


def singleton(rho) -> Body:
    return vpoly([rho])


def face(p) -> Body:
    """Face of states supported in projection ``p``, normalised by rank."""
    p = hermitian_part(np.asarray(p, dtype=complex))
    d = dim_of(p)
    v = range_basis(p, 0.5)
    r = v.shape[1]
    if r == 0:
        return Empty(d)
    proj = v @ v.conj().T
    if r == d:
        return Full(d)
    if r == 1:
        return VPoly(d, pt.VPolytope(d * d, to_coords(proj)[None, :]))
    return Face(d, proj)


def _trace_one_flat(d: int) -> pt.AffineSubspace:
    point = np.zeros(d * d)
    point[0] = 1 / np.sqrt(d)
    return pt.AffineSubspace(point, np.eye(d * d)[:, 1:])


def spec_section(point, directions=(), witness=None) -> Body:
    """Body ``(point + span(directions)) ∩ states``.

    ``point`` and ``directions`` are Hermitian matrices or coordinate vectors.
    ``witness`` is an optional list of states in the body whose mean lies in
    its relative interior.
    """
    point = np.asarray(point)
    if point.ndim == 2:
        d = dim_of(point)
        point = to_coords(point)
    else:
        d = int(round(np.sqrt(point.size)))
    dirs = np.asarray(directions)
    if dirs.size == 0:
        dirs = np.zeros((0, d * d))
    elif dirs.ndim == 3:
        dirs = to_coords_many(dirs)
    dirs = dirs.reshape(-1, d * d)
    flat = pt.intersect_flats(pt.AffineSubspace.from_spanning(point, dirs), _trace_one_flat(d))
    if flat is None:
        return Empty(d)
    if flat.dim == 0:
        rho = from_coords(flat.point)
        if np.linalg.eigvalsh(rho)[0] >= -_tol("psd"):
            return VPoly(d, pt.VPolytope(d * d, flat.point[None, :]))
        return Empty(d)
    wit = None if witness is None else tuple(check_density(w) for w in witness)
    return SpecSection(d, flat.point, flat.basis.T, wit)


def spec_from_states(states) -> Body:
    """Affine hull of ``states`` intersected with the state space, with the states as witness."""
    states = [check_density(s) for s in states]
    x = to_coords_many(states)
    centre = x.mean(axis=0)
    return spec_section(centre, x - centre, witness=states)


def spec_from_subspace(rows, d: int, witness=None) -> Body:
    """``span(rows) ∩ states`` for coordinate rows spanning a linear subspace."""
    rows = orthonormal_rows(rows) if np.asarray(rows).size else np.zeros((0, d * d))
    t = trace_coords(d)
    bt = rows @ t
    if rows.shape[0] == 0 or np.linalg.norm(bt) < 1e-12:
        return Empty(d)
    point = (bt / (bt @ bt)) @ rows
    return spec_section(point, rows, witness=witness)


# ---------------------------------------------------------------------------
# membership


@dataclass(frozen=True)
class Verdict:
    value: bool
    exact: bool = True
    inconclusive: bool = False

    def __bool__(self):
        return self.value


def _check_dim(B: Body, rho: np.ndarray) -> None:
    if rho.shape != (B.d, B.d):
        raise DimensionError(f"state of dimension {rho.shape[0]} against a body over dimension {B.d}")


def _ppt_ok(rho: np.ndarray, shape: BipartiteShape) -> bool:
    return float(np.linalg.eigvalsh(partial_transpose(rho, shape))[0]) >= -_tol("psd")


def member_verdict(B: Body, rho, tol: float | None = None) -> Verdict:
    rho = np.asarray(rho, dtype=complex)
    _check_dim(B, rho)
    tol = _tol("lp") if tol is None else tol
    if isinstance(B, Empty):
        return Verdict(False)
    if isinstance(B, Full):
        return Verdict(True)
    if isinstance(B, VPoly):
        return Verdict(pt.contains(B.poly, to_coords(rho), tol))
    if isinstance(B, SpecSection):
        return Verdict(B.affine.residual(to_coords(rho)) <= tol)
    if isinstance(B, Face):
        return Verdict(float(np.linalg.norm(rho - B.proj @ rho @ B.proj)) <= tol)
    if isinstance(B, PreimageNode):
        return member_verdict(B.child, partial_trace(rho, B.shape, B.side), tol)
    if isinstance(B, MeetNode):
        a = member_verdict(B.left, rho, tol)
        if not a.value:
            return a
        b = member_verdict(B.right, rho, tol)
        return Verdict(b.value, a.exact and b.exact, b.inconclusive)
    if isinstance(B, SeparableNode):
        P = np.kron(B.p1, B.p2)
        inside = float(np.linalg.norm(rho - P @ rho @ P)) <= tol
        return Verdict(inside and _ppt_ok(rho, B.shape), exact=B.exact)
    if isinstance(B, JoinNode):
        for child in (B.left, B.right):
            v = member_verdict(child, rho, tol)
            if v.value:
                return v
    if isinstance(B, ProjectedNode):
        other = B.shape.factor(3 - B.side)
        lift = tensor(rho, np.eye(other) / other) if B.side == 1 else tensor(np.eye(other) / other, rho)
        v = member_verdict(B.child, lift, tol)
        if v.value:
            return v
    return _conic_member(B, rho)


def member(B: Body, rho, tol: float | None = None) -> bool:
    return member_verdict(B, rho, tol).value


def _cone_var(prob: conic.ConicProblem, B: Body) -> slice:
    """Add variables constrained to the cone over ``B``; return the slice holding the point."""
    n = B.d * B.d
    eye = np.eye(n)
    if isinstance(B, Empty):
        s = prob.free(n)
        prob.equal([(eye, s)])
        return s
    if isinstance(B, Full):
        return prob.psd(B.d)
    if isinstance(B, VPoly):
        s = prob.free(n)
        mu = prob.nonneg(len(B.poly))
        prob.equal([(eye, s), (-B.poly.vertices.T, mu)])
        return s
    if isinstance(B, Face):
        s = prob.psd(B.d)
        prob.equal([(eye - B.compression, s)])
        return s
    if isinstance(B, SpecSection):
        s = prob.psd(B.d)
        keep = eye - B.dirs.T @ B.dirs
        prob.equal([(keep @ (eye - np.outer(B.point, trace_coords(B.d))), s)])
        return s
    if isinstance(B, JoinNode):
        s = prob.free(n)
        a = _cone_var(prob, B.left)
        b = _cone_var(prob, B.right)
        prob.equal([(eye, s), (-eye, a), (-eye, b)])
        return s
    if isinstance(B, MeetNode):
        a = _cone_var(prob, B.left)
        b = _cone_var(prob, B.right)
        prob.equal([(eye, a), (-eye, b)])
        return a
    if isinstance(B, PreimageNode):
        s = prob.psd(B.d)
        c = _cone_var(prob, B.child)
        T = partial_trace_matrix(B.shape, B.side)
        prob.equal([(T, s), (-np.eye(T.shape[0]), c)])
        return s
    if isinstance(B, ProjectedNode):
        c = _cone_var(prob, B.child)
        s = prob.free(n)
        T = partial_trace_matrix(B.shape, B.side)
        prob.equal([(eye, s), (-T, c)])
        return s
    if isinstance(B, TensorNode):
        s = prob.free(n)
        terms = [(eye, s)]
        if isinstance(B.left, VPoly):
            for g in B.left.generators:
                terms.append((-tensor_left_matrix(g, B.shape.d2), _cone_var(prob, B.right)))
        else:
            for g in B.right.generators:
                terms.append((-tensor_right_matrix(g, B.shape.d1), _cone_var(prob, B.left)))
        prob.equal(terms)
        return s
    if isinstance(B, SeparableNode):
        s = prob.psd(B.d)
        w = prob.psd(B.d)
        prob.equal([(np.eye(n), w), (-partial_transpose_matrix(B.shape), s)])
        prob.equal([(eye - compression_matrix(np.kron(B.p1, B.p2)), s)])
        return s
    raise UnsupportedBodyError(f"no cone formulation for {type(B).__name__}")


def _conic_member(B: Body, rho: np.ndarray) -> Verdict:
    prob = conic.ConicProblem()
    s = _cone_var(prob, B)
    prob.equal([(np.eye(B.d * B.d), s)], to_coords(rho))
    # every block of a trace-one problem has norm at most one
    res = prob.solve(bound=np.sqrt(prob.n_blocks))
    if res.inconclusive:
        warnings.warn(f"membership in {B!r} undecided after {res.iterations} iterations; "
                      "counted as non-member", InconclusiveMembershipWarning, stacklevel=3)
    return Verdict(res.feasible, exact=False, inconclusive=res.inconclusive)


def is_empty(B: Body) -> bool:
    if isinstance(B, Empty):
        return True
    if isinstance(B, (Full, VPoly, Face, SpecSection, SeparableNode)):
        return False
    if isinstance(B, (PreimageNode, ProjectedNode)):
        return is_empty(B.child)
    if isinstance(B, JoinNode):
        return is_empty(B.left) and is_empty(B.right)
    if isinstance(B, TensorNode):
        return is_empty(B.left) or is_empty(B.right)
    prob = conic.ConicProblem()
    s = _cone_var(prob, B)
    prob.equal([(trace_coords(B.d)[None, :], s)], [1.0])
    res = prob.solve(bound=np.sqrt(prob.n_blocks))
    if res.inconclusive:
        warnings.warn(f"emptiness of {B!r} undecided; treated as non-empty",
                      InconclusiveMembershipWarning, stacklevel=2)
    return res.status == conic.INFEASIBLE


# ---------------------------------------------------------------------------
# lattice operations


def _same_dim(A: Body, B: Body) -> None:
    if A.d != B.d:
        raise DimensionError(f"bodies over dimensions {A.d} and {B.d}")


def _section_meet(A: Body, B: Body) -> Body:
    """Meet of two affine-section-like bodies via the relative-interior search."""
    d = A.d
    rows_a = A.span_rows if isinstance(A, SpecSection) else _face_rows(A)
    rows_b = B.span_rows if isinstance(B, SpecSection) else _face_rows(B)
    rows = _subspace_meet(rows_a, rows_b)
    hint = _support_hint(A)
    hb = _support_hint(B)
    if hint is None:
        hint = hb
    elif hb is not None:
        hint = proj_meet(hint, hb)
    if rows.shape[0] == 0:
        return Empty(d)
    try:
        found = interior.find_state(rows, d, hint)
    except InconclusiveError:
        return spec_from_subspace(rows, d)
    if found.empty:
        return Empty(d)
    return spec_from_subspace(found.rows, d, witness=interior.witness_states(found, d))


def _face_rows(F: Face) -> np.ndarray:
    aff = F.affine
    return orthonormal_rows(np.vstack([aff.point[None, :], aff.basis.T]))


def _support_hint(B: Body):
    if isinstance(B, Face):
        return B.proj
    if isinstance(B, SpecSection) and B.witness is not None:
        return joint_support(B)
    return None


def _subspace_meet(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, a.shape[1]))
    M = np.vstack([a, -b]).T
    _, s, vt = np.linalg.svd(M, full_matrices=True)
    rank = int(np.sum(s > 1e-9))
    null = vt[rank:]
    if null.shape[0] == 0:
        return np.zeros((0, a.shape[1]))
    return orthonormal_rows(null[:, : a.shape[0]] @ a)


def meet(A: Body, B: Body, tol: float | None = None) -> Body:
    _same_dim(A, B)
    if isinstance(A, Empty) or isinstance(B, Empty):
        return Empty(A.d)
    if isinstance(A, Full):
        return B
    if isinstance(B, Full):
        return A
    if isinstance(A, VPoly) and isinstance(B, VPoly):
        return _from_polytope(A.d, pt.intersect(A.poly, B.poly, tol))
    if isinstance(B, VPoly) and isinstance(A, (SpecSection, Face)):
        A, B = B, A
    if isinstance(A, VPoly) and isinstance(B, (SpecSection, Face)):
        return _from_polytope(A.d, pt.intersect_affine(A.poly, B.affine, tol))
    if isinstance(A, Face) and isinstance(B, Face):
        return face(proj_meet(A.proj, B.proj))
    if isinstance(A, (Face, SpecSection)) and isinstance(B, (Face, SpecSection)):
        return _section_meet(A, B)
    return MeetNode(A.d, A, B)


def join(A: Body, B: Body, tol: float | None = None) -> Body:
    _same_dim(A, B)
    if isinstance(A, Empty):
        return B
    if isinstance(B, Empty):
        return A
    if isinstance(A, Full) or isinstance(B, Full):
        return Full(A.d)
    if isinstance(A, VPoly) and isinstance(B, VPoly):
        return VPoly(A.d, pt.hull_union(A.poly, B.poly, tol))
    return JoinNode(A.d, A, B)


def joint_support(B: Body) -> np.ndarray:
    """Projection onto the span of the supports of all states in ``B``."""
    d = B.d
    if isinstance(B, Empty):
        return np.zeros((d, d), dtype=complex)
    if isinstance(B, Full):
        return np.eye(d, dtype=complex)
    if isinstance(B, VPoly):
        return support_projection(B.generators.mean(axis=0))
    if isinstance(B, Face):
        return B.proj
    if isinstance(B, SpecSection):
        if B.witness is None:
            raise NeedsWitnessError("section was built without generating states")
        return support_projection(np.mean(B.witness, axis=0))
    if isinstance(B, JoinNode):
        return proj_join(joint_support(B.left), joint_support(B.right))
    if isinstance(B, PreimageNode):
        q = joint_support(B.child)
        other = np.eye(B.shape.factor(3 - B.side))
        return np.kron(q, other) if B.side == 1 else np.kron(other, q)
    if isinstance(B, ProjectedNode):
        return support_projection(partial_trace(joint_support(B.child), B.shape, B.side), 1e-8)
    if isinstance(B, TensorNode):
        return np.kron(joint_support(B.left), joint_support(B.right))
    if isinstance(B, SeparableNode):
        return np.kron(B.p1, B.p2)
    raise UnsupportedBodyError(f"joint support of {type(B).__name__} is not available")


def neg(B: Body) -> Body:
    """States orthogonal to every state of ``B``; ``neg(Empty) = Full``."""
    if isinstance(B, Empty):
        return Full(B.d)
    if isinstance(B, Full):
        return Empty(B.d)
    q = joint_support(B)
    return face(np.eye(B.d) - q)


# ---------------------------------------------------------------------------
# order and equality


def _and3(a, b):
    if a is False or b is False:
        return False
    if a is True and b is True:
        return True
    return None


def _all_members(states, B: Body, tol) -> bool | None:
    out = True
    for s in states:
        v = member_verdict(B, s, tol)
        if not v.value:
            if v.inconclusive:
                out = None
            else:
                return False
    return out


def _slice_inside(aff: pt.AffineSubspace, S: SpecSection, tol: float) -> bool:
    if S.affine.residual(aff.point) > tol:
        return False
    if aff.dim == 0:
        return True
    resid = aff.basis.T - (aff.basis.T @ S.dirs.T) @ S.dirs
    return float(np.abs(resid).max()) <= tol


def leq(A: Body, B: Body, tol: float | None = None, samples: int = SAMPLES, seed=0) -> bool | None:
    """Whether ``A ⊆ B``; ``None`` when sampling found no counterexample."""
    _same_dim(A, B)
    tol = _tol("lp") if tol is None else tol
    if isinstance(A, Empty) or isinstance(B, Full):
        return True
    if isinstance(B, Empty):
        return is_empty(A)
    if isinstance(A, VPoly):
        return _all_members(A.generators, B, tol)
    if isinstance(A, JoinNode):
        return _and3(leq(A.left, B, tol, samples, seed), leq(A.right, B, tol, samples, seed))
    if isinstance(B, MeetNode):
        return _and3(leq(A, B.left, tol, samples, seed), leq(A, B.right, tol, samples, seed))
    if isinstance(A, Full):
        if isinstance(B, SpecSection):
            return B.dirs.shape[0] == B.d * B.d - 1
        if isinstance(B, (VPoly, Face)):
            return False
    if isinstance(A, Face):
        if isinstance(B, Face):
            return bool(np.allclose(B.proj @ A.proj, A.proj, atol=1e-8))
        if isinstance(B, SpecSection):
            return _slice_inside(A.affine, B, tol)
        if isinstance(B, VPoly):
            # a face of rank >= 2 has infinitely many extreme points
            return False
    if isinstance(A, SpecSection):
        if isinstance(B, SpecSection):
            if _slice_inside(A.affine, B, tol):
                return True
            if A.witness is not None:
                return all(B.affine.residual(to_coords(w)) <= tol for w in A.witness)
        if isinstance(B, Face) and A.witness is not None:
            q = joint_support(A)
            return bool(np.allclose(B.proj @ q, q, atol=1e-8))
    if isinstance(B, JoinNode):
        if leq(A, B.left, tol, samples, seed) or leq(A, B.right, tol, samples, seed):
            return True
    if isinstance(A, MeetNode):
        if leq(A.left, B, tol, samples, seed) or leq(A.right, B, tol, samples, seed):
            return True
    rng = rng_from(seed)
    for s in sample(A, samples, rng):
        v = member_verdict(B, s, tol)
        if not v.value and not v.inconclusive:
            return False
    return None


@dataclass(frozen=True)
class Comparison:
    equal: bool
    exact: bool
    probes: int = 0
    disagreements: int = 0


def compare(A: Body, B: Body, tol: float | None = None, probes: int = PROBES, seed=0) -> Comparison:
    """Set equality: exact where the representations allow it, else probe agreement."""
    _same_dim(A, B)
    if isinstance(A, Empty) or isinstance(B, Empty):
        other = B if isinstance(A, Empty) else A
        return Comparison(is_empty(other), not other.lazy)
    exact_kinds = (Empty, Full, VPoly, Face, SpecSection)
    if isinstance(A, exact_kinds) and isinstance(B, exact_kinds):
        ab = leq(A, B, tol, samples=probes // 2, seed=seed)
        ba = leq(B, A, tol, samples=probes // 2, seed=seed)
        if ab is not None and ba is not None:
            return Comparison(bool(ab and ba), True)
    rng = rng_from(seed)
    n_each = (2 * probes) // 5
    pts = sample(A, n_each, rng) + sample(B, n_each, rng)
    d = A.d
    while len(pts) < probes:
        pts.append(random_state(d, rng, pure_prob=0.5))
    bad = 0
    for s in pts:
        if member(A, s, tol) != member(B, s, tol):
            bad += 1
    return Comparison(bad == 0, False, len(pts), bad)


def equal(A: Body, B: Body, tol: float | None = None, probes: int = PROBES, seed=0) -> bool:
    return compare(A, B, tol, probes, seed).equal


# ---------------------------------------------------------------------------
# sampling from bodies


def _dirichlet_mixtures(states, n: int, rng) -> list[np.ndarray]:
    states = list(states)
    out = list(states[:n])
    k = len(states)
    while len(out) < n:
        if k == 1:
            out.append(states[0])
            continue
        if rng.random() < 0.5:
            i, j = rng.choice(k, 2, replace=False)
            a = rng.random()
            out.append(a * states[i] + (1 - a) * states[j])
        else:
            w = rng.dirichlet(np.ones(k))
            out.append(np.tensordot(w, np.asarray(states), axes=1))
    return out


def _face_state(v: np.ndarray, rng) -> np.ndarray:
    r = v.shape[1]
    s = random_state(r, rng, pure_prob=0.5)
    return v @ s @ v.conj().T


def _lift(sigma: np.ndarray, shape: BipartiteShape, side: int, rng) -> np.ndarray:
    """A state of the product whose reduction to ``side`` is ``sigma``."""
    omega = random_state(shape.d, rng, pure_prob=0.6)
    red = partial_trace(omega, shape, side)
    w, u = np.linalg.eigh(red)
    inv_sqrt = (u / np.sqrt(np.maximum(w, 1e-12))) @ u.conj().T
    ws, us = np.linalg.eigh(hermitian_part(sigma))
    sq = (us * np.sqrt(np.clip(ws, 0, None))) @ us.conj().T
    k = sq @ inv_sqrt
    K = np.kron(k, np.eye(shape.d2)) if side == 1 else np.kron(np.eye(shape.d1), k)
    out = K @ omega @ K.conj().T
    return hermitian_part(out / np.trace(out).real)


def sample(B: Body, n: int, rng=None) -> list[np.ndarray]:
    """Up to ``n`` states of ``B`` (generators, mixtures, lifts), deterministic in ``rng``."""
    rng = rng_from(rng)
    d = B.d
    if n <= 0 or isinstance(B, Empty):
        return []
    if isinstance(B, Full):
        return [random_state(d, rng, pure_prob=0.4) for _ in range(n)]
    if isinstance(B, VPoly):
        return _dirichlet_mixtures(B.generators, n, rng)
    if isinstance(B, Face):
        v = range_basis(B.proj)
        return [_face_state(v, rng) for _ in range(n)]
    if isinstance(B, SpecSection):
        wit = B.witness
        if wit is None:
            try:
                found = interior.find_state(B.span_rows, d)
            except InconclusiveError:
                return []
            if found.empty:
                return []
            wit = interior.witness_states(found, d)
        out = _dirichlet_mixtures(wit, max(1, n // 2), rng)
        centre = np.mean(wit, axis=0)
        while len(out) < n and B.dirs.shape[0]:
            D = from_coords(rng.normal(size=B.dirs.shape[0]) @ B.dirs)
            lo, hi = 0.0, 4.0
            for _ in range(40):
                mid = (lo + hi) / 2
                if np.linalg.eigvalsh(centre + mid * D)[0] >= 0:
                    lo = mid
                else:
                    hi = mid
            out.append(hermitian_part(centre + lo * rng.random() ** 0.3 * D))
        return out[:n]
    if isinstance(B, JoinNode):
        a = sample(B.left, n, rng)
        b = sample(B.right, n, rng)
        out = []
        for i in range(n):
            if not a or not b:
                out.extend((a or b)[i:i + 1])
                continue
            t = rng.random()
            out.append(t * a[i % len(a)] + (1 - t) * b[i % len(b)])
        return out
    if isinstance(B, MeetNode):
        cands = sample(B.left, n, rng) + sample(B.right, n, rng)
        return [s for s in cands if member(B, s)][:n]
    if isinstance(B, PreimageNode):
        base = sample(B.child, n, rng)
        return [_lift(s, B.shape, B.side, rng) for s in base]
    if isinstance(B, ProjectedNode):
        return [hermitian_part(partial_trace(s, B.shape, B.side)) for s in sample(B.child, n, rng)]
    if isinstance(B, TensorNode):
        a = sample(B.left, n, rng)
        b = sample(B.right, n, rng)
        prods = [np.kron(x, y) for x, y in zip(a, b)]
        return _dirichlet_mixtures(prods, n, rng) if prods else []
    if isinstance(B, SeparableNode):
        v1, v2 = range_basis(B.p1), range_basis(B.p2)
        prods = [np.kron(_face_state(v1, rng), _face_state(v2, rng)) for _ in range(n)]
        return _dirichlet_mixtures(prods, n, rng)
    raise UnsupportedBodyError(f"cannot sample {type(B).__name__}")


# ---------------------------------------------------------------------------
# entropy superlevel sets


@dataclass(frozen=True)
class EntropyLevel:
    """The states with von Neumann entropy at least ``threshold``."""

    threshold: float
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise DimensionError("dimension must be positive")
        if not (0.0 <= self.threshold <= np.log(self.d) + 1e-12):
            raise ValueError(f"threshold must lie in [0, ln {self.d}]")


def entropy_superlevel_member(level: EntropyLevel, rho, tol: float | None = None) -> bool:
    tol = _tol("psd") if tol is None else tol
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (level.d, level.d):
        raise DimensionError("state dimension does not match the level set")
    return von_neumann_entropy(rho) >= level.threshold - tol


__all__ = [
    "Body", "Empty", "Full", "VPoly", "SpecSection", "Face", "JoinNode", "MeetNode",
    "PreimageNode", "ProjectedNode", "TensorNode", "SeparableNode",
    "empty", "full", "vpoly", "singleton", "face", "spec_section", "spec_from_states",
    "spec_from_subspace", "Verdict", "member", "member_verdict", "is_empty", "meet", "join",
    "joint_support", "neg", "leq", "compare", "equal", "Comparison", "sample",
    "EntropyLevel", "entropy_superlevel_member", "as_shape",
]
