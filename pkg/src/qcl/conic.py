"""Feasibility of ``{z : A z = b, z in K}`` for products of simple cones.

``K`` is a product of blocks: Hermitian PSD matrices (stored in real
coordinates), nonnegative orthants and free variables.  The solver runs
Douglas-Rachford splitting between the affine set and ``K``, i.e. alternating
reflections.  When the problem is feasible the iterates converge to a point of
the intersection.  When it is infeasible the step ``z_{k+1} - z_k`` converges
to the gap vector between the two sets, which yields a Farkas certificate
``A^T y in K*, b @ y < 0``; it is checked with explicit slack against a bound
on the norm of feasible points, so an infeasible verdict is a proof rather
than a stall heuristic.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import tol as _tol
from .hermitian import hermitian_basis

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
INCONCLUSIVE = "inconclusive"

MAX_ITER = 10_000
_CHECK_EVERY = 5


@dataclass
class ConicResult:
    status: str
    x: np.ndarray | None
    residual: float
    iterations: int

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE

    @property
    def inconclusive(self) -> bool:
        return self.status == INCONCLUSIVE


@dataclass
class ConicProblem:
    """Incrementally built feasibility problem over stacked cone blocks."""

    size: int = 0
    _blocks: list = field(default_factory=list)
    _rows: list = field(default_factory=list)
    _rhs: list = field(default_factory=list)

    def _add(self, kind: str, n: int, d: int = 0) -> slice:
        s = slice(self.size, self.size + n)
        self._blocks.append((kind, s, d))
        self.size += n
        return s

    def psd(self, d: int) -> slice:
        return self._add("psd", d * d, d)

    def nonneg(self, n: int) -> slice:
        return self._add("nonneg", n)

    def free(self, n: int) -> slice:
        return self._add("free", n)

    def equal(self, terms: list[tuple[np.ndarray, slice]], rhs=None) -> None:
        """Add ``sum_k M_k @ z[s_k] == rhs`` (``rhs`` defaults to zero)."""
        m = terms[0][0].shape[0]
        self._rows.append(terms)
        self._rhs.append(np.zeros(m) if rhs is None else np.asarray(rhs, dtype=float))

    def _assemble(self) -> tuple[np.ndarray, np.ndarray]:
        blocks = []
        for terms in self._rows:
            row = np.zeros((terms[0][0].shape[0], self.size))
            for M, s in terms:
                row[:, s] += M
            blocks.append(row)
        if not blocks:
            return np.zeros((0, self.size)), np.zeros(0)
        return np.vstack(blocks), np.concatenate(self._rhs)

    @property
    def n_blocks(self) -> int:
        return len(self._blocks)

    def _cone(self, dual: bool = False):
        groups: dict[int, list[int]] = {}
        nonneg = np.zeros(self.size, dtype=bool)
        free = np.zeros(self.size, dtype=bool)
        for kind, s, d in self._blocks:
            if kind == "psd":
                groups.setdefault(d, []).extend(range(s.start, s.stop))
            elif kind == "nonneg":
                nonneg[s] = True
            else:
                free[s] = True
        # PSD blocks of equal size are projected together with one batched eigh
        batched = []
        for d, idx in groups.items():
            basis = hermitian_basis(d).reshape(d * d, d * d)
            batched.append((d, np.array(idx), basis, basis.conj().T))

        def cone(z):
            out = z.copy()
            out[nonneg] = np.maximum(z[nonneg], 0.0)
            for d, idx, basis, back in batched:
                x = z[idx].reshape(-1, d * d)
                m = (x @ basis).reshape(-1, d, d)
                w, v = np.linalg.eigh(m)
                neg = w[:, 0] < 0
                if not neg.any():
                    continue
                w = np.clip(w[neg], 0, None)
                mp = np.einsum("kij,kj,klj->kil", v[neg], w, v[neg].conj())
                x = x.copy()
                x[neg] = (mp.reshape(-1, d * d) @ back).real
                out[idx] = x.reshape(-1)
            if dual:
                out[free] = 0.0  # the dual of a free block is {0}
            return out

        return cone

    def solve(self, tol: float | None = None, max_iter: int = MAX_ITER,
              bound: float | None = None) -> ConicResult:
        """Run the splitting.

        ``bound`` is an upper bound on the Euclidean norm of every feasible
        point.  With it, a second splitting searches the Farkas system
        ``A^T y in K*, b @ y = -1`` and any approximate solution whose dual-cone
        error ``e`` satisfies ``bound * e < 1`` proves infeasibility.  Without
        it the solver can only report feasible or inconclusive.
        """
        tol = _tol("feas") if tol is None else tol
        A, b = self._assemble()
        cone = self._cone()
        dual_cone = self._cone(dual=True)
        if A.shape[0] == 0:
            return ConicResult(FEASIBLE, cone(np.zeros(self.size)), 0.0, 0)
        primal = _Splitting(A, b, cone)
        if primal.inconsistent(tol):
            return ConicResult(INFEASIBLE, None, primal.inconsistency, 0)

        dual = None
        if bound is not None:
            m, n = A.shape
            # variables (w, y) with w - A^T y = 0 and b @ y = -1
            Ad = np.zeros((n + 1, n + m))
            Ad[:n, :n] = np.eye(n)
            Ad[:n, n:] = -A.T
            Ad[n, n:] = b
            bd = np.zeros(n + 1)
            bd[n] = -1.0

            def dcone(v):
                out = v.copy()
                out[:n] = dual_cone(v[:n])
                return out

            dual = _Splitting(Ad, bd, dcone)
            if dual.inconsistent(1e-9):
                dual = None

        def certified(y):
            by = float(b @ y)
            if by >= 0:
                return False
            w = A.T @ y
            err = float(np.linalg.norm(w - dual_cone(w)))
            return -by > bound * err * (1 + 1e-6) + 1e-12 * float(np.linalg.norm(w))

        res = np.inf
        for it in range(1, max_iter + 1):
            c = primal.step()
            res = float(np.linalg.norm(A @ c - b))
            if res <= tol:
                return ConicResult(FEASIBLE, c, res, it)
            if dual is not None:
                dc = dual.step()
                if it % _CHECK_EVERY == 0:
                    # both the cone point and the affine point carry a candidate y
                    if certified(dc[self.size:]) or certified(dual.last_affine[self.size:]):
                        return ConicResult(INFEASIBLE, None, res, it)
        return ConicResult(INCONCLUSIVE, None, res, max_iter)


class _Splitting:
    """Douglas-Rachford iteration for ``{x : A x = b} ∩ K``."""

    def __init__(self, A: np.ndarray, b: np.ndarray, cone):
        self.A, self.b, self.cone = A, b, cone
        pinv = np.linalg.pinv(A, rcond=1e-12)
        self.base = pinv @ b
        self.null_proj = np.eye(A.shape[1]) - pinv @ A
        self.inconsistency = float(np.linalg.norm(A @ self.base - b))
        self.z = np.zeros(A.shape[1])
        self.last_affine = self.base

    def inconsistent(self, tol: float) -> bool:
        return self.inconsistency > tol

    def step(self) -> np.ndarray:
        a = self.base + self.null_proj @ (self.z - self.base)
        c = self.cone(2 * a - self.z)
        self.z = self.z + c - a
        self.last_affine = a
        return c
