"""Bipartite maps between bodies: the product map, the reductions and their inverse.

``lambda_`` sends a pair of factor bodies to the hull of their tensor
products, ``tau`` sends a body on the product to its two reductions, and
``tau_inv`` pulls a factor body back to every state reducing into it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import body as bd
from . import polytope as pt
from .config import tol as _tol
from .errors import DimensionError, UnsupportedBodyError
from .hermitian import (
    BipartiteShape,
    as_shape,
    check_density,
    partial_trace,
    partial_transpose,
    tensor,
)

SEPARABLE = "Separable"
ENTANGLED = "Entangled"
UNKNOWN = "Unknown"

# shapes at which a positive partial transpose implies separability
PPT_EXACT = {(2, 2), (2, 3), (3, 2)}


def _check_factor(C: bd.Body, shape: BipartiteShape, side: int) -> None:
    if C.d != shape.factor(side):
        raise DimensionError(f"factor {side} of {shape} has dimension {shape.factor(side)}, body has {C.d}")


def _factor_proj(C: bd.Body):
    if isinstance(C, bd.Full):
        return np.eye(C.d, dtype=complex)
    if isinstance(C, bd.Face):
        return C.proj
    return None


def lambda_(C1: bd.Body, C2: bd.Body, shape) -> bd.Body:
    """``conv(C1 ⊗ C2)`` on the product system."""
    shape = as_shape(shape)
    _check_factor(C1, shape, 1)
    _check_factor(C2, shape, 2)
    if isinstance(C1, bd.Empty) or isinstance(C2, bd.Empty):
        return bd.Empty(shape.d)
    if isinstance(C1, bd.VPoly) and isinstance(C2, bd.VPoly):
        return bd.vpoly([tensor(a, b) for a in C1.generators for b in C2.generators])
    p1, p2 = _factor_proj(C1), _factor_proj(C2)
    if p1 is not None and p2 is not None:
        return bd.SeparableNode(shape, p1, p2)
    if isinstance(C1, bd.VPoly) and p2 is not None or isinstance(C2, bd.VPoly) and p1 is not None:
        return bd.TensorNode(shape, C1, C2)
    raise UnsupportedBodyError(
        f"product map accepts vpoly, face, empty or full factors, got {C1.kind} and {C2.kind}")


def tau_side(C: bd.Body, shape, side: int) -> bd.Body:
    """Reduction of ``C`` to factor ``side``."""
    shape = as_shape(shape)
    if C.d != shape.d:
        raise DimensionError(f"body over dimension {C.d} does not factor as {shape}")
    dk = shape.factor(side)
    if isinstance(C, bd.Empty):
        return bd.Empty(dk)
    if isinstance(C, bd.Full):
        return bd.Full(dk)
    if isinstance(C, bd.VPoly):
        return bd.vpoly([partial_trace(g, shape, side) for g in C.generators])
    if isinstance(C, bd.JoinNode):
        # linear images commute with hulls of unions
        return bd.join(tau_side(C.left, shape, side), tau_side(C.right, shape, side))
    return bd.ProjectedNode(shape, side, C)


def tau(C: bd.Body, shape) -> tuple[bd.Body, bd.Body]:
    return tau_side(C, shape, 1), tau_side(C, shape, 2)


def tau_inv(C: bd.Body, shape, side: int = 1) -> bd.Body:
    """Every state whose reduction to ``side`` lies in ``C``."""
    shape = as_shape(shape)
    _check_factor(C, shape, side)
    if isinstance(C, bd.Empty):
        return bd.Empty(shape.d)
    if isinstance(C, bd.Full):
        return bd.Full(shape.d)
    return bd.PreimageNode(shape, side, C)


def _require_vpoly(*bodies: bd.Body) -> None:
    for C in bodies:
        if not isinstance(C, bd.VPoly):
            raise UnsupportedBodyError(f"expected a vpoly body, got {C.kind}")


def round_trip_residual(C1: bd.Body, C2: bd.Body, shape) -> float:
    """Distance between ``tau(lambda_(C1, C2))`` and ``(C1, C2)`` (zero when equal)."""
    _require_vpoly(C1, C2)
    t1, t2 = tau(lambda_(C1, C2, shape), shape)
    return max(pt.set_residual(t1.poly, C1.poly), pt.set_residual(t2.poly, C2.poly))


def round_trip_up(C1: bd.Body, C2: bd.Body, shape, tol: float = 1e-8) -> bool:
    _require_vpoly(C1, C2)
    t1, t2 = tau(lambda_(C1, C2, shape), shape)
    return bd.equal(t1, C1, tol) and bd.equal(t2, C2, tol)


def lambda_tau(C: bd.Body, shape) -> bd.Body:
    _require_vpoly(C)
    t1, t2 = tau(C, shape)
    return lambda_(t1, t2, shape)


@dataclass(frozen=True, eq=False)
class SeparableDecomposition:
    """``rho = sum_ij weights[i, j] left[i] ⊗ right[j]``."""

    weights: np.ndarray
    left: tuple
    right: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        left = tuple(check_density(s) for s in self.left)
        right = tuple(check_density(s) for s in self.right)
        if w.shape != (len(left), len(right)):
            raise ValueError(f"weights have shape {w.shape}, expected {(len(left), len(right))}")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1) > _tol("tr"):
            raise ValueError(f"weights sum to {w.sum()}, not 1")
        if len({s.shape for s in left}) != 1 or len({s.shape for s in right}) != 1:
            raise DimensionError("factor states have mixed dimensions")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @property
    def shape(self) -> BipartiteShape:
        return BipartiteShape(self.left[0].shape[0], self.right[0].shape[0])

    @property
    def state(self) -> np.ndarray:
        out = np.zeros((self.shape.d, self.shape.d), dtype=complex)
        for i, a in enumerate(self.left):
            for j, b in enumerate(self.right):
                out += self.weights[i, j] * tensor(a, b)
        return out


def invariant_simplex(dec: SeparableDecomposition) -> bd.Body:
    """Hull of all ``left[i] ⊗ right[j]``; contains the decomposed state."""
    return bd.vpoly([tensor(a, b) for a in dec.left for b in dec.right])


def ppt_min_eig(rho, shape) -> float:
    shape = as_shape(shape)
    return float(np.linalg.eigvalsh(partial_transpose(np.asarray(rho, dtype=complex), shape))[0])


def ppt_exact(shape) -> bool:
    return tuple(as_shape(shape)) in PPT_EXACT


def ppt_separable(rho, shape) -> bool:
    """Positive partial transpose; equivalent to separability only when :func:`ppt_exact`."""
    return ppt_min_eig(rho, shape) >= -_tol("psd")


def product_distance(rho, shape) -> float:
    shape = as_shape(shape)
    rho = np.asarray(rho, dtype=complex)
    return float(np.linalg.norm(rho - tensor(partial_trace(rho, shape, 1), partial_trace(rho, shape, 2))))


def is_product_state(rho, shape, tol: float = 1e-9) -> bool:
    return product_distance(rho, shape) < tol


@dataclass(frozen=True)
class PropositionClass:
    verdict: str
    certificate: dict = field(default_factory=dict)


def classify_proposition(C: bd.Body, shape) -> PropositionClass:
    """Separable iff every generator is separable (decided by PPT where exact)."""
    shape = as_shape(shape)
    if C.d != shape.d:
        raise DimensionError(f"body over dimension {C.d} does not factor as {shape}")
    if isinstance(C, bd.Empty):
        return PropositionClass(SEPARABLE, {"fixed_point": "empty body", "generators": 0})
    if isinstance(C, bd.Full):
        return PropositionClass(ENTANGLED, {"reason": "contains every entangled state"})
    if not isinstance(C, bd.VPoly):
        return PropositionClass(UNKNOWN, {"reason": f"{C.kind} bodies have no finite generator list"})
    for i, g in enumerate(C.generators):
        m = ppt_min_eig(g, shape)
        if m < -_tol("psd"):
            return PropositionClass(ENTANGLED, {
                "generator_index": i,
                "generator": g,
                "ppt_min_eigenvalue": m,
            })
    if ppt_exact(shape):
        return PropositionClass(SEPARABLE, {
            "fixed_point": "separable set S(H), which lambda_tau maps onto itself",
            "generators": len(C.generators),
        })
    return PropositionClass(UNKNOWN, {"reason": f"PPT is not sufficient for separability at {shape}"})


__all__ = [
    "lambda_", "tau", "tau_side", "tau_inv", "round_trip_up", "round_trip_residual", "lambda_tau",
    "SeparableDecomposition", "invariant_simplex", "ppt_min_eig", "ppt_exact", "ppt_separable",
    "product_distance", "is_product_state", "PropositionClass", "classify_proposition",
    "SEPARABLE", "ENTANGLED", "UNKNOWN",
]
