import numpy as np
import pytest

from qcl import body as bd
from qcl import hermitian as h
from qcl import lattice as L
from qcl.errors import DimensionError, PreconditionError
from qcl.sampling import random_mixed

K0, K1 = h.basis_state(2, 0), h.basis_state(2, 1)
PLUS = h.pure_from_vector([1, 1])
MINUS = h.pure_from_vector([1, -1])


def bloch(x, y, z):
    return (np.eye(2) + x * np.array([[0, 1], [1, 0]]) + y * np.array([[0, -1j], [1j, 0]])
            + z * np.diag([1.0, -1.0])) / 2


def test_from_states_and_atoms():
    a = L.from_states([K0, K1, np.eye(2) / 2])
    assert a.dim == 2 and L.is_good(a)
    assert L.atom_of(PLUS).dim == 1
    assert L.zero(2).is_zero and L.is_good(L.zero(2))
    assert L.one(3).dim == 9
    with pytest.raises(ValueError):
        L.from_states([])
    with pytest.raises(DimensionError):
        L.from_states([K0, h.basis_state(3, 0)])


def test_meet_of_diagonal_and_x_planes():
    a = L.from_states([K0, K1])
    b = L.from_states([PLUS, MINUS])
    m = L.meet_L(a, b)
    assert L.equal_L(m, L.atom_of(np.eye(2) / 2))
    assert L.is_good(m)


def test_meet_without_states_is_zero():
    a = L.atom_of(K0)
    b = L.atom_of(K1)
    assert L.meet_L(a, b).is_zero
    # the planes share only a traceless direction
    c = L.from_states([K0, PLUS])
    d = L.from_states([K1, MINUS])
    assert L.meet_L(c, d).is_zero


def test_join_and_order():
    a, b = L.atom_of(K0), L.atom_of(K1)
    j = L.join_L(a, b)
    assert j.dim == 2
    assert L.leq_L(a, j) and L.leq_L(b, j) and not L.leq_L(j, a)
    assert L.join_L(L.zero(2), a) is a


def test_neg_examples():
    assert L.equal_L(L.neg_L(L.atom_of(K0)), L.atom_of(K1))
    assert L.neg_L(L.atom_of(np.eye(2) / 2)).is_zero
    assert L.neg_L(L.zero(3)).dim == 9
    n = L.neg_L(L.atom_of(h.basis_state(3, 0)))
    assert n.dim == 4
    assert L.meet_L(n, L.atom_of(h.basis_state(3, 0))).is_zero


def test_face_to_L_dimension():
    assert L.face_to_L(np.diag([1.0, 1.0, 0.0])).dim == 4
    assert L.face_to_L(np.zeros((3, 3))).is_zero
    a = L.face_to_L(L.VNElement(np.diag([0.0, 1.0, 1.0])))
    assert L.is_good(a) and a.dim == 4


def test_psi_and_tau_L(rng):
    a = L.from_states([K0, K1])
    b = L.atom_of(PLUS)
    p = L.psi(a, b)
    assert p.d == 4 and p.dim == 2 and L.is_good(p)
    assert L.equal_L(L.tau_L(p, (2, 2), 1), a)
    assert L.equal_L(L.tau_L(p, (2, 2), 2), b)
    bell = L.atom_of(h.bell_state())
    assert L.equal_L(L.tau_L(bell, (2, 2), 1), L.atom_of(np.eye(2) / 2))
    with pytest.raises(DimensionError):
        L.tau_L(L.atom_of(random_mixed(3, rng)), (2, 2), 1)


def test_modular_check_trivial_cases(rng):
    a = L.atom_of(K0)
    b = L.from_states([K0, K1])
    for x in (L.zero(2), a, b, L.one(2), L.atom_of(K1)):
        assert L.modular_check(a, b, x)
    with pytest.raises(PreconditionError):
        L.modular_check(b, a, a)


def test_modular_law_counterexample():
    # x misses b, yet a ∨ x meets b in more than a
    a = L.atom_of(np.eye(2) / 2)
    b = L.from_states([np.eye(2) / 2, K0])
    x = L.from_states([bloch(1, 0, 0), bloch(0.6, 0, 0.8), bloch(0.9, 0, 0.2)])
    assert L.leq_L(a, b)
    assert L.meet_L(x, b).is_zero
    rhs = L.meet_L(L.join_L(a, x), b)
    assert L.equal_L(rhs, b)
    assert not L.modular_check(a, b, x)


def test_to_body_kinds():
    assert isinstance(L.to_body(L.zero(2)), bd.Empty)
    assert isinstance(L.to_body(L.one(2)), bd.Full)
    assert isinstance(L.to_body(L.atom_of(K0)), bd.VPoly)
    B = L.to_body(L.from_states([K0, K1]))
    assert bd.member(B, 0.3 * K0 + 0.7 * K1)
    assert not bd.member(B, PLUS)


def test_projection_lattice():
    p = L.VNElement(np.diag([1.0, 0.0, 0.0]))
    q = L.VNElement(np.diag([0.0, 1.0, 0.0]))
    j = L.vn_join(p, q)
    assert L.vn_leq(p, j) and not L.vn_leq(j, p)
    assert np.allclose(L.vn_meet(p, q).proj, 0, atol=1e-10)
    assert isinstance(L.vn_to_body(j), bd.Face)
    with pytest.raises(ValueError):
        L.VNElement(np.diag([0.5, 0.0]))
