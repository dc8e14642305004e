import itertools

import numpy as np
import pytest
from scipy.optimize import linprog

from qcl import dd, lp


def test_simplex_matches_scipy(rng):
    for _ in range(30):
        m, n = 3, 6
        A = rng.normal(size=(m, n))
        x0 = rng.random(n)
        b = A @ x0
        c = rng.random(n)
        ours = lp.solve(c, A, b)
        ref = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
        assert ours.ok
        assert np.isclose(ours.objective, ref.fun, atol=1e-8)
        assert np.allclose(A @ ours.x, b, atol=1e-8)


def test_simplex_infeasible_and_unbounded():
    assert lp.solve([1.0], [[1.0]], [-1.0]).status == lp.INFEASIBLE
    assert lp.solve([-1.0, 0.0], [[1.0, -1.0]], [0.0]).status == lp.UNBOUNDED


def test_min_l1_residual():
    square = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
    res, w = lp.min_l1_residual(square, np.array([0.5, 0.5]))
    assert res < 1e-12 and np.isclose(w.sum(), 1.0)
    res, _ = lp.min_l1_residual(square, np.array([2.0, 0.5]))
    assert np.isclose(res, 1.0)


def test_cube_facets_and_vertices():
    cube = np.array(list(itertools.product([0.0, 1.0], repeat=3)))
    normals, offsets = dd.facets(cube)
    assert normals.shape[0] == 6
    assert np.all(cube @ normals.T + offsets >= -1e-12)
    back = dd.vertices(normals, offsets)
    assert len(back) == 8
    assert {tuple(np.round(v, 9)) for v in back} == {tuple(v) for v in cube}


def test_extreme_rays_of_orthant_and_line():
    rays = dd.extreme_rays(np.eye(3))
    assert np.allclose(np.sort(np.abs(rays), axis=0), np.sort(np.eye(3), axis=0))
    with pytest.raises(ValueError):
        dd.extreme_rays(np.array([[1.0, 0.0]]))


def test_random_hull_round_trip(rng):
    pts = rng.normal(size=(25, 3))
    normals, offsets = dd.facets(pts)
    assert np.all(pts @ normals.T + offsets >= -1e-9)
    verts = dd.vertices(normals, offsets)
    for v in verts:
        assert np.min(np.abs(pts - v).sum(axis=1)) < 1e-7
