"""Finite-dimensional Hermitian operators and density matrices.

Operators are plain ``numpy`` complex arrays.  The real Euclidean structure
given by the trace inner product is realised through a fixed orthonormal
basis (scaled identity followed by generalized Gell-Mann matrices), so every
``d x d`` Hermitian operator has a real coordinate vector of length ``d**2``.
"""
from __future__ import annotations

import functools
import math
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .config import tol
from .errors import DimensionError, InvalidCoordsError, NotADensityMatrix


class BipartiteShape(NamedTuple):
    d1: int
    d2: int

    @property
    def d(self) -> int:
        return self.d1 * self.d2

    def factor(self, side: int) -> int:
        if side not in (1, 2):
            raise ValueError(f"side must be 1 or 2, got {side!r}")
        return self.d1 if side == 1 else self.d2

    def __str__(self):
        return f"{self.d1}x{self.d2}"

    @classmethod
    def parse(cls, text: str) -> "BipartiteShape":
        try:
            a, b = text.lower().split("x")
            shape = cls(int(a), int(b))
        except ValueError:
            raise ValueError(f"shape must look like 2x3, got {text!r}") from None
        if shape.d1 < 1 or shape.d2 < 1:
            raise ValueError(f"shape factors must be positive, got {text!r}")
        return shape


def as_shape(shape) -> BipartiteShape:
    if isinstance(shape, BipartiteShape):
        return shape
    if isinstance(shape, str):
        return BipartiteShape.parse(shape)
    d1, d2 = shape
    return BipartiteShape(int(d1), int(d2))


# --------------------------------------------------------------------------
# basis and coordinates


@functools.lru_cache(maxsize=None)
def _basis(d: int) -> np.ndarray:
    mats = [np.eye(d, dtype=complex) / math.sqrt(d)]
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(diag).astype(complex) * math.sqrt(2.0 / (l * (l + 1))) / math.sqrt(2))
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = 1 / math.sqrt(2)
            mats.append(m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j / math.sqrt(2)
            m[k, j] = 1j / math.sqrt(2)
            mats.append(m)
    out = np.array(mats)
    out.setflags(write=False)
    return out


def hermitian_basis(d: int) -> np.ndarray:
    """Orthonormal basis of the ``d**2``-dimensional real space of Hermitian operators.

    Order: ``I/sqrt(d)``, the diagonal Gell-Mann matrices, then the symmetric
    and antisymmetric off-diagonal ones (index pairs in lexicographic order),
    each scaled to unit Hilbert-Schmidt norm.  Returned as an array of shape
    ``(d**2, d, d)``.
    """
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise DimensionError(f"dimension must be a positive integer, got {d!r}")
    return _basis(int(d))


@functools.lru_cache(maxsize=None)
def _flat_basis(d: int) -> np.ndarray:
    # rows: conj-free flattening so that coords = Re(B @ vec(A^T))
    out = _basis(d).reshape(d * d, d * d)
    out.setflags(write=False)
    return out


def dim_of(a: np.ndarray) -> int:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a.shape[0]


def to_coords(a) -> np.ndarray:
    """Real coordinates of a Hermitian operator in :func:`hermitian_basis`."""
    a = np.asarray(a, dtype=complex)
    d = dim_of(a)
    return np.real(_flat_basis(d) @ a.T.reshape(-1))


def to_coords_many(mats) -> np.ndarray:
    mats = np.asarray(mats, dtype=complex)
    if mats.ndim != 3:
        raise DimensionError("expected a stack of square matrices")
    n, d, _ = mats.shape
    return np.real(mats.transpose(0, 2, 1).reshape(n, d * d) @ _flat_basis(d).T)


def coords_dim(n: int) -> int:
    d = math.isqrt(n)
    if d < 1 or d * d != n:
        raise InvalidCoordsError(f"coordinate length {n} is not a positive perfect square")
    return d


def from_coords(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise InvalidCoordsError("coordinates must be a flat vector")
    d = coords_dim(x.size)
    return (x @ _flat_basis(d)).reshape(d, d)


def from_coords_many(xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 2:
        raise InvalidCoordsError("expected a 2-d array of coordinate rows")
    d = coords_dim(xs.shape[1])
    return (xs @ _flat_basis(d)).reshape(-1, d, d)


def trace_inner(a, b) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    dim_of(a)
    # tr(AB) = sum_ij A_ij B_ji
    return float(np.real(np.sum(a * b.T)))


# --------------------------------------------------------------------------
# validation


def is_hermitian(a, eps: float | None = None) -> bool:
    a = np.asarray(a)
    eps = tol("herm") if eps is None else eps
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.allclose(a, a.conj().T, rtol=0, atol=eps)


def hermitian_part(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    return (a + a.conj().T) / 2


def eigvalsh(a) -> np.ndarray:
    return np.linalg.eigvalsh(hermitian_part(a))


def check_density(rho) -> np.ndarray:
    """Return ``rho`` as a complex array, raising if it is not a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    dim_of(rho)
    if not is_hermitian(rho):
        raise NotADensityMatrix("matrix is not Hermitian")
    tr = np.real(np.trace(rho))
    if abs(tr - 1) > tol("tr"):
        raise NotADensityMatrix(f"trace is {tr!r}, expected 1")
    lo = eigvalsh(rho)[0]
    if lo < -tol("psd"):
        raise NotADensityMatrix(f"minimum eigenvalue {lo:.3g} is negative")
    return rho


def is_density(rho) -> bool:
    try:
        check_density(rho)
    except (NotADensityMatrix, DimensionError):
        return False
    return True


# --------------------------------------------------------------------------
# states


def pure_from_vector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    norm = np.linalg.norm(psi)
    if psi.size == 0 or norm == 0:
        raise ValueError("cannot build a pure state from the zero vector")
    psi = psi / norm
    return np.outer(psi, psi.conj())


def basis_state(d: int, i: int) -> np.ndarray:
    rho = np.zeros((d, d), dtype=complex)
    rho[i, i] = 1
    return rho


def maximally_mixed(d: int) -> np.ndarray:
    if d < 1:
        raise DimensionError("dimension must be positive")
    return np.eye(d, dtype=complex) / d


def bell_state(d: int = 2) -> np.ndarray:
    """Maximally entangled ``sum_i |ii> / sqrt(d)`` projector on ``d x d``."""
    psi = np.zeros(d * d, dtype=complex)
    psi[[i * d + i for i in range(d)]] = 1
    return pure_from_vector(psi)


def werner_state(p: float) -> np.ndarray:
    """``p |Phi+><Phi+| + (1 - p) I/4`` on two qubits."""
    if not 0 <= p <= 1:
        raise ValueError(f"Werner parameter must lie in [0, 1], got {p}")
    return p * bell_state(2) + (1 - p) * maximally_mixed(4)


def mix(pairs: Iterable[tuple[float, np.ndarray]]) -> np.ndarray:
    """Convex combination ``sum_k w_k rho_k`` of states of equal dimension."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("mix needs at least one (weight, state) pair")
    weights = np.array([float(w) for w, _ in pairs])
    if np.any(weights < 0):
        raise ValueError(f"negative mixing weight in {weights.tolist()}")
    if abs(weights.sum() - 1) > tol("tr"):
        raise ValueError(f"mixing weights sum to {weights.sum()!r}, expected 1")
    states = [np.asarray(r, dtype=complex) for _, r in pairs]
    d = dim_of(states[0])
    if any(s.shape != (d, d) for s in states):
        raise DimensionError("all mixed states must share one dimension")
    out = np.zeros((d, d), dtype=complex)
    for w, s in zip(weights, states):
        out += w * s
    return out


def tensor(*ops) -> np.ndarray:
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def _check_shape(rho: np.ndarray, shape: BipartiteShape) -> None:
    d = dim_of(rho)
    if d != shape.d:
        raise DimensionError(f"operator of dimension {d} does not factor as {shape}")


def partial_trace(rho, shape, keep: int) -> np.ndarray:
    """Trace out the factor not listed in ``keep`` (1 or 2)."""
    shape = as_shape(shape)
    rho = np.asarray(rho, dtype=complex)
    _check_shape(rho, shape)
    t = rho.reshape(shape.d1, shape.d2, shape.d1, shape.d2)
    if keep == 1:
        return np.einsum("ijkj->ik", t)
    if keep == 2:
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 1 or 2, got {keep!r}")


def partial_transpose(rho, shape, side: int = 2) -> np.ndarray:
    shape = as_shape(shape)
    rho = np.asarray(rho, dtype=complex)
    _check_shape(rho, shape)
    t = rho.reshape(shape.d1, shape.d2, shape.d1, shape.d2)
    if side == 2:
        t = t.transpose(0, 3, 2, 1)
    elif side == 1:
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"side must be 1 or 2, got {side!r}")
    return t.reshape(shape.d, shape.d)


def purity(rho) -> float:
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.trace(rho @ rho)))


def von_neumann_entropy(rho) -> float:
    """``-tr(rho ln rho)`` with eigenvalues below the PSD tolerance dropped."""
    w = eigvalsh(rho)
    w = w[w > tol("psd")]
    return float(max(0.0, -np.sum(w * np.log(w))))


def support_projection(rho, eps: float | None = None) -> np.ndarray:
    """Orthogonal projection onto the span of eigenvectors with eigenvalue > ``eps``."""
    eps = tol("psd") if eps is None else eps
    if eps <= 0:
        raise ValueError("support tolerance must be positive")
    w, v = np.linalg.eigh(hermitian_part(rho))
    v = v[:, w > eps]
    return v @ v.conj().T


# --------------------------------------------------------------------------
# projections (the von Neumann lattice)


def range_basis(p, eps: float = 1e-8) -> np.ndarray:
    """Orthonormal columns spanning the range of a PSD operator."""
    w, v = np.linalg.eigh(hermitian_part(p))
    return v[:, w > eps]


def projector(cols: np.ndarray) -> np.ndarray:
    return cols @ cols.conj().T


def is_projection(p, eps: float | None = None) -> bool:
    eps = tol("herm") * 10 if eps is None else eps
    p = np.asarray(p, dtype=complex)
    return is_hermitian(p, eps) and np.allclose(p @ p, p, rtol=0, atol=eps)


def projection_rank(p) -> int:
    return int(round(np.real(np.trace(p))))


def proj_join(p, q) -> np.ndarray:
    """Projection onto ``range(p) + range(q)``."""
    return support_projection(np.asarray(p) + np.asarray(q), 1e-8)


def proj_meet(p, q) -> np.ndarray:
    """Projection onto ``range(p) ∩ range(q)``."""
    d = dim_of(p)
    eye = np.eye(d)
    # range(p) ∩ range(q) = ker((I-p) + (I-q))
    w, v = np.linalg.eigh(hermitian_part(2 * eye - p - q))
    v = v[:, w < 1e-8]
    return v @ v.conj().T


# --------------------------------------------------------------------------
# linear maps written in real coordinates


def map_matrix(fn, d_in: int) -> np.ndarray:
    """Real matrix of a Hermiticity-preserving linear map ``fn`` in basis coordinates."""
    cols = [to_coords(hermitian_part(fn(b))) for b in hermitian_basis(d_in)]
    return np.array(cols).T


@functools.lru_cache(maxsize=None)
def partial_trace_matrix(shape: BipartiteShape, keep: int) -> np.ndarray:
    out = map_matrix(lambda b: partial_trace(b, shape, keep), shape.d)
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=None)
def partial_transpose_matrix(shape: BipartiteShape, side: int = 2) -> np.ndarray:
    out = map_matrix(lambda b: partial_transpose(b, shape, side), shape.d)
    out.setflags(write=False)
    return out


def compression_matrix(p) -> np.ndarray:
    """Matrix of ``X -> p X p`` in coordinates."""
    p = np.asarray(p, dtype=complex)
    return map_matrix(lambda b: p @ b @ p, dim_of(p))


def tensor_left_matrix(a, d2: int) -> np.ndarray:
    """Matrix of ``Y -> a ⊗ Y`` from ``d2``-coordinates to product coordinates."""
    a = np.asarray(a, dtype=complex)
    return map_matrix(lambda b: np.kron(a, b), d2)


def tensor_right_matrix(b, d1: int) -> np.ndarray:
    """Matrix of ``X -> X ⊗ b``."""
    b = np.asarray(b, dtype=complex)
    return map_matrix(lambda a: np.kron(a, b), d1)


def trace_coords(d: int) -> np.ndarray:
    """Coordinate row ``t`` with ``t @ to_coords(A) == tr(A)``."""
    out = np.zeros(d * d)
    out[0] = math.sqrt(d)
    return out


def orthonormal_rows(rows: Sequence[np.ndarray] | np.ndarray, eps: float | None = None) -> np.ndarray:
    """Orthonormal basis (as rows) for the span of ``rows``."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.size == 0:
        return np.zeros((0, rows.shape[-1] if rows.ndim == 2 else 0))
    eps = tol("rank") if eps is None else eps
    _, s, vt = np.linalg.svd(rows, full_matrices=False)
    return vt[s > eps]
