"""Seeded random states, polytopes and decompositions for tests and the suite."""
from __future__ import annotations

import numpy as np

from .hermitian import BipartiteShape, as_shape, pure_from_vector, tensor


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_pure(d: int, rng) -> np.ndarray:
    rng = rng_from(rng)
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    return pure_from_vector(psi)


def random_mixed(d: int, rng, rank: int | None = None) -> np.ndarray:
    """``G G^dag / tr(G G^dag)`` with complex Gaussian ``G`` of shape ``(d, rank)``."""
    rng = rng_from(rng)
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_state(d: int, rng, pure_prob: float = 0.3) -> np.ndarray:
    rng = rng_from(rng)
    if rng.random() < pure_prob:
        return random_pure(d, rng)
    return random_mixed(d, rng)


def random_states(d: int, n: int, rng, pure_prob: float = 0.3) -> list[np.ndarray]:
    rng = rng_from(rng)
    return [random_state(d, rng, pure_prob) for _ in range(n)]


def random_hermitian(d: int, rng) -> np.ndarray:
    rng = rng_from(rng)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (g + g.conj().T) / 2


def random_projection(d: int, rank: int, rng) -> np.ndarray:
    rng = rng_from(rng)
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    q, _ = np.linalg.qr(g)
    return q @ q.conj().T


def random_product(shape, rng, pure: bool = False) -> np.ndarray:
    shape = as_shape(shape)
    rng = rng_from(rng)
    if pure:
        return tensor(random_pure(shape.d1, rng), random_pure(shape.d2, rng))
    return tensor(random_state(shape.d1, rng), random_state(shape.d2, rng))


def random_entangled_pure(shape, rng, margin: float = 1e-3) -> np.ndarray:
    """Random pure state whose reduced purity is at most ``1 - margin``."""
    shape = as_shape(shape)
    rng = rng_from(rng)
    while True:
        rho = random_pure(shape.d, rng)
        m = rho.reshape(shape.d1, shape.d2, shape.d1, shape.d2)
        r1 = np.einsum("ijkj->ik", m)
        if np.trace(r1 @ r1).real <= 1 - margin:
            return rho


def random_decomposition(shape, rng, max_left: int = 3, max_right: int = 3):
    """``(weights, left, right)`` with a random weight matrix on random factor states."""
    shape = as_shape(shape)
    rng = rng_from(rng)
    n1 = int(rng.integers(1, max_left + 1))
    n2 = int(rng.integers(1, max_right + 1))
    left = random_states(shape.d1, n1, rng)
    right = random_states(shape.d2, n2, rng)
    w = rng.random((n1, n2)) + 0.05
    return w / w.sum(), left, right


def random_pool_subsets(d: int, n_sets: int, rng, pool_size: int = 7, max_size: int = 5) -> list[list[np.ndarray]]:
    """``n_sets`` random subsets of one shared pool of states of random rank.

    Hulls of subsets of a common pool meet in non-trivial faces far more often
    than hulls of independent states, and low ranks make supports proper.
    """
    rng = rng_from(rng)
    pool = [random_mixed(d, rng, rank=int(rng.integers(1, d + 1))) for _ in range(pool_size)]
    out = []
    for _ in range(n_sets):
        k = int(rng.integers(1, min(max_size, pool_size) + 1))
        idx = rng.choice(pool_size, size=k, replace=False)
        out.append([pool[i] for i in sorted(idx)])
    return out


__all__ = [
    "random_pool_subsets",
    "BipartiteShape",
    "rng_from",
    "random_pure",
    "random_mixed",
    "random_state",
    "random_states",
    "random_hermitian",
    "random_projection",
    "random_product",
    "random_entangled_pure",
    "random_decomposition",
]
