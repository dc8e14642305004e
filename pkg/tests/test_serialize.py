import json

import numpy as np
import pytest

from qcl import body as bd
from qcl import hermitian as h
from qcl import lattice as L
from qcl import product as pr
from qcl import serialize as ser
from qcl.errors import InputError
from qcl.sampling import random_mixed

K0, K1 = h.basis_state(2, 0), h.basis_state(2, 1)


def _stable(to_json, from_json, obj):
    text = ser.dumps(to_json(obj))
    assert ser.dumps(to_json(from_json(json.loads(text)))) == text
    return text


def test_matrix_round_trip(rng):
    m = random_mixed(3, rng)
    back = ser.matrix_from_json(json.loads(ser.dumps(ser.matrix_to_json(m))))
    assert np.allclose(back, m, atol=1e-11)
    _stable(ser.matrix_to_json, ser.matrix_from_json, m)


def test_negative_zero_is_normalised():
    text = ser.dumps(ser.matrix_to_json(np.array([[-0.0, 1e-15], [0.0, 1.0]])))
    assert "-0.0" not in text


def test_body_round_trips(rng):
    d = 3
    bodies = [
        bd.empty(d), bd.full(d),
        bd.vpoly([random_mixed(d, rng) for _ in range(3)]),
        bd.face(np.diag([1.0, 1.0, 0.0])),
        bd.spec_from_states([random_mixed(d, rng) for _ in range(2)]),
        bd.join(bd.face(np.diag([1.0, 1.0, 0.0])), bd.singleton(h.basis_state(3, 2))),
    ]
    for B in bodies:
        _stable(ser.body_to_json, ser.body_from_json, B)


def test_product_body_round_trips():
    shape = (2, 2)
    for B in (pr.tau_inv(bd.singleton(np.eye(2) / 2), shape),
              pr.tau_side(bd.meet(bd.face(np.diag([1.0, 1.0, 0, 0])), bd.full(4)), shape, 2),
              pr.lambda_(bd.vpoly([K0, K1]), bd.full(2), shape),
              pr.lambda_(bd.face(K0 * 0 + np.eye(2)), bd.face(np.eye(2)), shape)):
        _stable(ser.body_to_json, ser.body_from_json, B)


def test_lattice_and_report_round_trips(rng):
    a = L.from_states([random_mixed(2, rng) for _ in range(2)])
    _stable(ser.lelement_to_json, ser.lelement_from_json, a)
    _stable(ser.lelement_to_json, ser.lelement_from_json, L.zero(2))
    rep = pr.classify_proposition(bd.singleton(h.bell_state()), (2, 2))
    _stable(ser.report_to_json, ser.report_from_json, rep)
    dec = pr.SeparableDecomposition(np.array([[0.25, 0.75]]), (K0,), (K0, K1))
    _stable(ser.decomposition_to_json, ser.decomposition_from_json, dec)


@pytest.mark.parametrize("doc", [
    {"dim": 2, "re": [[1, 0]], "im": [[0, 0], [0, 0]]},
    {"kind": "vpoly", "generators": []},
    {"kind": "nonsense"},
    {"kind": "join", "left": {"kind": "empty", "dim": 2}},
    {"kind": "vpoly", "generators": [{"dim": 2, "re": [[2, 0], [0, -1]], "im": [[0, 0], [0, 0]]}]},
])
def test_malformed_documents(doc):
    with pytest.raises(InputError):
        if "kind" in doc:
            ser.body_from_json(doc)
        else:
            ser.matrix_from_json(doc)


def test_lelement_basis_mismatch():
    doc = ser.lelement_to_json(L.from_states([K0, K1]))
    doc["basis"] = doc["basis"][:1]
    with pytest.raises(InputError):
        ser.lelement_from_json(doc)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_byte_stability_sweep(d):
    rng = np.random.default_rng(d)
    for _ in range(10):
        r = lambda k=None: random_mixed(d, rng, rank=k)  # noqa: E731
        bodies = [bd.vpoly([r() for _ in range(3)]), bd.spec_from_states([r(1) for _ in range(2)]),
                  bd.face(h.support_projection(r(d - 1))),
                  bd.join(bd.face(h.support_projection(r(d - 1))), bd.singleton(r()))]
        for B in bodies:
            _stable(ser.body_to_json, ser.body_from_json, B)
        for a in (L.from_states([r() for _ in range(2)]), L.face_to_L(h.support_projection(r(d - 1)))):
            _stable(ser.lelement_to_json, ser.lelement_from_json, a)


def test_foreign_basis_is_checked():
    doc = ser.lelement_to_json(L.from_states([K0, K1]))
    doc["basis"][0] = ser.matrix_to_json(np.array([[0, 1], [1, 0]]) / np.sqrt(2))
    with pytest.raises(InputError):
        ser.lelement_from_json(doc)
