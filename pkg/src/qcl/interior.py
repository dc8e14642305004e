"""Does a linear subspace of Hermitian operators contain a state?

The search maximises the smallest eigenvalue over the trace-one slice of the
subspace by projected ascent on a soft-min of the spectrum.  A positive
optimum gives a relative-interior witness.  When the optimum sits on the
boundary, the orthogonal complement is searched for a PSD certificate ``W``
(theorem of alternatives): every PSD element of the subspace is then
supported in ``ker W``, so the problem is restricted to that smaller face and
repeated.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import tol as _tol
from .errors import InconclusiveError
from .hermitian import from_coords, hermitian_basis, map_matrix, orthonormal_rows, range_basis, to_coords

ITERATIONS = 1000
CERT_TOL = 1e-11
NONEMPTY = "nonempty"
EMPTY = "empty"


@dataclass(frozen=True, eq=False)
class Interior:
    status: str
    witness: np.ndarray | None  # relative-interior state (d x d)
    support: np.ndarray | None  # projection onto the face containing every state of the subspace
    rows: np.ndarray  # orthonormal coordinate rows spanning the states' span
    value: float

    @property
    def empty(self) -> bool:
        return self.status == EMPTY


def _embedding(v: np.ndarray) -> np.ndarray:
    """Isometry from Herm(r) coordinates onto Herm(range v) inside Herm(d) coordinates."""
    r = v.shape[1]
    return map_matrix(lambda b: v @ b @ v.conj().T, r)


def _complement(rows: np.ndarray, n: int) -> np.ndarray:
    if rows.shape[0] == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(rows, full_matrices=True)
    rank = int(np.sum(s > 1e-9))
    return vt[rank:]


def max_min_eig(rows: np.ndarray, r: int, iterations: int = ITERATIONS) -> tuple[float, np.ndarray | None]:
    """Approximate ``max lambda_min(X)`` over trace-one ``X`` in ``span(rows)``.

    ``rows`` are orthonormal Herm(r) coordinate vectors.  Returns the value
    and the best ``X`` found; ``(-inf, None)`` when the slice is empty
    (every element traceless).
    """
    if rows.shape[0] == 0:
        return -np.inf, None
    t = np.zeros(r * r)
    t[0] = np.sqrt(r)
    bt = rows @ t
    nb = float(np.linalg.norm(bt))
    if nb < 1e-12:
        return -np.inf, None
    c0 = bt / nb**2
    dirs = _complement(bt[None, :] / nb, rows.shape[0])  # (k-1, k)
    basis = hermitian_basis(r)
    D = dirs @ rows  # traceless directions, Herm(r) coords
    D_mats = np.tensordot(D, basis, axes=1) if D.shape[0] else np.zeros((0, r, r))
    X0 = from_coords(c0 @ rows)

    def evaluate(y):
        X = X0 + np.tensordot(y, D_mats, axes=1) if D.shape[0] else X0
        w, v = np.linalg.eigh((X + X.conj().T) / 2)
        return X, w, v

    y = np.zeros(D.shape[0])
    X, w, v = evaluate(y)
    best_val, best_X = float(w[0]), X
    if D.shape[0] == 0 or best_val > 0.1 / r:
        return best_val, best_X
    step = 0.25 / r
    for k in range(iterations):
        mu = max(1e-3 * 0.99**k, 1e-10) * step * r
        weights = np.exp(-(w - w[0]) / mu)
        weights /= weights.sum()
        # gradient of the soft-min: sum_i w_i |v_i><v_i| projected onto the directions
        G = (v * weights) @ v.conj().T
        g = D @ to_coords(G)
        gn = float(np.linalg.norm(g))
        if gn < 1e-14:
            break
        y = y + (step / (1 + k / 25)) * g / gn
        X, w, v = evaluate(y)
        if w[0] > best_val:
            best_val, best_X = float(w[0]), X
        if best_val > 0.1 / r:
            break
    return best_val, best_X


def _orthogonal_psd(rows: np.ndarray, r: int) -> np.ndarray | None:
    """A trace-one PSD ``W`` orthogonal to ``span(rows)``, or ``None`` if there is none.

    By the theorem of alternatives such a ``W`` exists exactly when the span
    has no positive definite element.  ``None`` is also returned when the
    feasibility solve is undecided.
    """
    from . import conic

    prob = conic.ConicProblem()
    s = prob.psd(r)
    t = np.zeros(r * r)
    t[0] = np.sqrt(r)
    prob.equal([(np.vstack([rows, t[None, :]]), s)], np.r_[np.zeros(rows.shape[0]), 1.0])
    # W is only trusted on directions where it is clearly positive; a loose solve
    # leaves small spurious eigenvalues on genuine support directions
    res = prob.solve(tol=CERT_TOL, bound=1.0)
    if not res.feasible:
        return None
    W = from_coords(res.x[s])
    return (W + W.conj().T) / 2


def find_state(rows: np.ndarray, d: int, support: np.ndarray | None = None) -> Interior:
    """Relative-interior search for states in ``span(rows)`` (Herm(d) coordinates).

    ``support`` optionally gives a projection already known to contain the
    support of every state in the subspace.
    """
    ok = _tol("interior_ok")
    bad = _tol("interior_empty")
    rows = orthonormal_rows(rows) if np.asarray(rows).size else np.zeros((0, d * d))
    P_M = rows.T @ rows
    Q = np.eye(d, dtype=complex) if support is None else np.asarray(support, dtype=complex)
    value, X, E, B = -np.inf, None, None, None
    for _ in range(d + 1):
        V = range_basis(Q)
        r = V.shape[1]
        if r == 0:
            return Interior(EMPTY, None, None, np.zeros((0, d * d)), -np.inf)
        E = _embedding(V)  # (d^2, r^2)
        # M ∩ Herm(Q) in r-coordinates
        _, s, vt = np.linalg.svd(E - P_M @ E, full_matrices=True)
        rank = int(np.sum(s > 1e-9))
        B = vt[rank:]
        if B.shape[0] == 0:
            return Interior(EMPTY, None, None, np.zeros((0, d * d)), -np.inf)
        value, Xr = max_min_eig(B, r)
        if Xr is None:
            return Interior(EMPTY, None, None, np.zeros((0, d * d)), -np.inf)
        X = V @ Xr @ V.conj().T
        if value > 1e-9:
            break
        # look for a PSD certificate orthogonal to the subspace to shrink the face
        W = _orthogonal_psd(B, r)
        if W is None:
            if value <= -ok:
                # no certificate although the ascent stalled below zero: try harder
                value, Xr = max_min_eig(B, r, 5 * ITERATIONS)
                X = V @ Xr @ V.conj().T
            break
        w, U = np.linalg.eigh(W)
        keep = U[:, w <= 1e-6 * w[-1]]
        Q = V @ keep @ keep.conj().T @ V.conj().T
    if value > -ok:
        X = (X + X.conj().T) / 2
        return Interior(NONEMPTY, X, V @ V.conj().T, B @ E.T, value)
    if value < -bad:
        return Interior(EMPTY, None, None, np.zeros((0, d * d)), value)
    raise InconclusiveError(f"relative-interior search undecided: best minimum eigenvalue {value:.3e}")


def witness_states(found: Interior, d: int) -> list[np.ndarray]:
    """States spanning the subspace found: ``X`` and ``X ± eps D_i`` for traceless ``D_i``."""
    X = found.witness
    V = range_basis(found.support)
    lam = float(np.linalg.eigvalsh(V.conj().T @ X @ V)[0])
    states = [X]
    t = np.zeros(d * d)
    t[0] = np.sqrt(d)
    bt = found.rows @ t
    traceless = _complement(bt[None, :] / np.linalg.norm(bt), found.rows.shape[0]) @ found.rows
    for row in traceless:
        D = from_coords(row)
        eps = 0.5 * max(lam, 0.0) / max(np.abs(np.linalg.eigvalsh(D)).max(), 1e-15)
        states.append(X + eps * D)
        states.append(X - eps * D)
    return states
