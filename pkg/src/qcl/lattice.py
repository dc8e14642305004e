"""The lattice of subspace sections ``S ∩ states`` with good representatives.

An element is stored as an orthonormal basis (real coordinate rows) of its
good representative ``S = span(S ∩ states)`` together with states spanning
``S``.  The zero element has an empty basis and no generators.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import body as bd
from . import interior
from .errors import DimensionError, PreconditionError
from .hermitian import (
    as_shape,
    check_density,
    from_coords,
    partial_trace,
    partial_trace_matrix,
    proj_join,
    proj_meet,
    pure_from_vector,
    range_basis,
    support_projection,
    tensor,
    to_coords_many,
    orthonormal_rows,
)


@dataclass(frozen=True, eq=False)
class LElement:
    d: int
    basis: np.ndarray  # (k, d*d) orthonormal rows
    generators: tuple

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def support(self) -> np.ndarray:
        """Projection onto the joint support of the generators."""
        if self.is_zero:
            return np.zeros((self.d, self.d), dtype=complex)
        return support_projection(np.mean(self.generators, axis=0))

    def __repr__(self):
        return f"LElement(d={self.d}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class VNElement:
    """A closed subspace of the Hilbert space, given by its projection."""

    proj: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.proj, dtype=complex)
        if not np.allclose(p @ p, p, atol=1e-8) or not np.allclose(p, p.conj().T, atol=1e-8):
            raise ValueError("not an orthogonal projection")
        object.__setattr__(self, "proj", p)

    @property
    def d(self) -> int:
        return self.proj.shape[0]


def zero(d: int) -> LElement:
    return LElement(d, np.zeros((0, d * d)), ())


def from_states(states) -> LElement:
    states = [check_density(s) for s in states]
    if not states:
        raise ValueError("from_states needs at least one state")
    d = states[0].shape[0]
    if any(s.shape != (d, d) for s in states):
        raise DimensionError("states have different dimensions")
    return LElement(d, orthonormal_rows(to_coords_many(states)), tuple(states))


def atom_of(rho) -> LElement:
    return from_states([rho])


def face_to_L(F) -> LElement:
    """Element spanned by the states supported in a projection."""
    p = F.proj if isinstance(F, VNElement) else np.asarray(F, dtype=complex)
    d = p.shape[0]
    v = range_basis(p, 0.5)
    r = v.shape[1]
    if r == 0:
        return zero(d)
    gens = [pure_from_vector(v[:, i]) for i in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            gens.append(pure_from_vector(v[:, i] + v[:, j]))
            gens.append(pure_from_vector(v[:, i] + 1j * v[:, j]))
    return from_states(gens)


def one(d: int) -> LElement:
    return face_to_L(np.eye(d))


def _same(a: LElement, b: LElement) -> None:
    if a.d != b.d:
        raise DimensionError(f"elements over dimensions {a.d} and {b.d}")


def _inside(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    if a.shape[0] == 0:
        return True
    if b.shape[0] == 0:
        return False
    resid = a - (a @ b.T) @ b
    return float(np.abs(resid).max()) <= tol


def leq_L(a: LElement, b: LElement, tol: float | None = None) -> bool:
    _same(a, b)
    return _inside(a.basis, b.basis, 1e-8 if tol is None else tol)


def equal_L(a: LElement, b: LElement, tol: float | None = None) -> bool:
    return leq_L(a, b, tol) and leq_L(b, a, tol)


def join_L(a: LElement, b: LElement) -> LElement:
    _same(a, b)
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    return LElement(a.d, orthonormal_rows(np.vstack([a.basis, b.basis])), a.generators + b.generators)


def _subspace_meet(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return bd._subspace_meet(a, b)


def meet_L(a: LElement, b: LElement) -> LElement:
    """Intersection of the sections; zero when the subspace meet holds no state.

    Raises :class:`~qcl.errors.InconclusiveError` when the relative-interior
    search cannot decide.
    """
    _same(a, b)
    if a.is_zero or b.is_zero:
        return zero(a.d)
    if leq_L(a, b):
        return a
    if leq_L(b, a):
        return b
    rows = _subspace_meet(a.basis, b.basis)
    if rows.shape[0] == 0:
        return zero(a.d)
    found = interior.find_state(rows, a.d, proj_meet(a.support, b.support))
    if found.empty:
        return zero(a.d)
    return LElement(a.d, orthonormal_rows(found.rows), tuple(interior.witness_states(found, a.d)))


def neg_L(a: LElement) -> LElement:
    """Orthocomplement section: every state orthogonal to all of ``a``."""
    if a.is_zero:
        return one(a.d)
    return face_to_L(np.eye(a.d) - a.support)


def is_good(a: LElement, tol: float = 1e-9) -> bool:
    """Whether the generators are states spanning exactly the stored subspace."""
    if a.is_zero:
        return len(a.generators) == 0
    gens = np.asarray(a.generators)
    for g in gens:
        if np.linalg.eigvalsh((g + g.conj().T) / 2)[0] < -1e-8 or abs(np.trace(g).real - 1) > 1e-8:
            return False
    span = orthonormal_rows(to_coords_many(gens))
    return span.shape[0] == a.dim and _inside(span, a.basis, 1e-8) and _inside(a.basis, span, 1e-8)


def psi(a: LElement, b: LElement) -> LElement:
    """``span(S1 ⊗ S2)`` with pairwise tensor products of generators."""
    d = a.d * b.d
    if a.is_zero or b.is_zero:
        return zero(d)
    gens = tuple(tensor(x, y) for x in a.generators for y in b.generators)
    mats_a = [from_coords(r) for r in a.basis]
    mats_b = [from_coords(r) for r in b.basis]
    rows = to_coords_many([np.kron(x, y) for x in mats_a for y in mats_b])
    return LElement(d, orthonormal_rows(rows), gens)


def tau_L(a: LElement, shape, keep: int) -> LElement:
    """Image under the partial trace onto factor ``keep``."""
    shape = as_shape(shape)
    if a.d != shape.d:
        raise DimensionError(f"element over dimension {a.d} does not factor as {shape}")
    dk = shape.factor(keep)
    if a.is_zero:
        return zero(dk)
    T = partial_trace_matrix(shape, keep)
    gens = tuple(partial_trace(g, shape, keep) for g in a.generators)
    return LElement(dk, orthonormal_rows(a.basis @ T.T), gens)


def modular_check(a: LElement, b: LElement, x: LElement) -> bool:
    """Whether ``a ∨ (x ∧ b) == (a ∨ x) ∧ b`` for ``a ≤ b``."""
    if not leq_L(a, b):
        raise PreconditionError("modular law needs a <= b")
    return equal_L(join_L(a, meet_L(x, b)), meet_L(join_L(a, x), b))


def to_body(a: LElement) -> bd.Body:
    """The section as a convex body."""
    d = a.d
    if a.is_zero:
        return bd.Empty(d)
    if a.dim == d * d:
        return bd.Full(d)
    if a.dim == 1:
        return bd.singleton(a.generators[0])
    return bd.spec_from_subspace(a.basis, d, witness=a.generators)


# projections ---------------------------------------------------------------


def vn_join(p: VNElement, q: VNElement) -> VNElement:
    return VNElement(proj_join(p.proj, q.proj))


def vn_meet(p: VNElement, q: VNElement) -> VNElement:
    return VNElement(proj_meet(p.proj, q.proj))


def vn_leq(p: VNElement, q: VNElement) -> bool:
    return bool(np.allclose(q.proj @ p.proj, p.proj, atol=1e-8))


def vn_to_body(p: VNElement) -> bd.Body:
    return bd.face(p.proj)


__all__ = [
    "LElement", "VNElement", "zero", "one", "from_states", "atom_of", "face_to_L",
    "leq_L", "equal_L", "join_L", "meet_L", "neg_L", "is_good", "psi", "tau_L",
    "modular_check", "to_body", "vn_join", "vn_meet", "vn_leq", "vn_to_body",
]
