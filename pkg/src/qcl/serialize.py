"""JSON encoding of matrices, polytopes, bodies, lattice elements and reports.

Floats are rounded to ``DIGITS`` decimals before writing.  Parsed objects
remember their source document; when one is written again, every number that
agrees with the source to ``SNAP`` is copied back verbatim.  Derived fields
(orthonormal bases, projections) recomputed from rounded inputs would
otherwise drift in the last printed digit, and ``emit(parse(emit(x)))`` must
reproduce the same bytes.
"""
from __future__ import annotations

import json

import numpy as np

from . import body as bd
from . import polytope as pt
from .errors import InputError
from .hermitian import BipartiteShape, check_density, from_coords, to_coords, to_coords_many
from .lattice import LElement, from_states, zero
from .product import PropositionClass, SeparableDecomposition

DIGITS = 12
SNAP = 1e-9
_SOURCE = "_json_source"


def _num(x: float) -> float:
    v = round(float(x), DIGITS)
    return 0.0 if v == 0 else v


def _nums(a) -> list:
    a = np.asarray(a, dtype=float)
    if a.ndim == 0:
        return _num(a)
    return [_nums(x) for x in a]


def _snap(new, old):
    if isinstance(new, float) and isinstance(old, (int, float)) and not isinstance(old, bool):
        return float(old) if abs(new - old) <= SNAP else new
    if isinstance(new, list) and isinstance(old, list) and len(new) == len(old):
        return [_snap(a, b) for a, b in zip(new, old)]
    if isinstance(new, dict) and isinstance(old, dict):
        return {k: _snap(v, old[k]) if k in old else v for k, v in new.items()}
    return new


def _remember(obj, doc):
    try:
        object.__setattr__(obj, _SOURCE, doc)
    except AttributeError:
        pass
    return obj


def _recall(obj, out: dict) -> dict:
    src = getattr(obj, _SOURCE, None)
    return out if src is None else _snap(out, src)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, allow_nan=False) + "\n"


# matrices ------------------------------------------------------------------


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"expected a square matrix, got shape {m.shape}")
    return {"dim": m.shape[0], "re": _nums(m.real), "im": _nums(m.imag)}


def matrix_from_json(obj) -> np.ndarray:
    try:
        d = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad matrix JSON: {exc}") from exc
    if re.shape != (d, d) or im.shape != (d, d):
        raise InputError(f"matrix parts must be {d}x{d}, got {re.shape} and {im.shape}")
    return re + 1j * im


# polytopes -----------------------------------------------------------------


def polytope_to_json(P: pt.VPolytope) -> dict:
    return {"ambient_dim": P.ambient_dim, "vertices": _nums(P.vertices.reshape(-1, P.ambient_dim))}


def polytope_from_json(obj) -> pt.VPolytope:
    try:
        n = int(obj["ambient_dim"])
        v = np.asarray(obj["vertices"], dtype=float).reshape(-1, n)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad polytope JSON: {exc}") from exc
    return pt.VPolytope(n, v)


# bodies --------------------------------------------------------------------


def _shape_json(shape: BipartiteShape) -> list:
    return [shape.d1, shape.d2]


def _mats(ms) -> list:
    return [matrix_to_json(m) for m in ms]


def body_to_json(B: bd.Body) -> dict:
    out = {"kind": B.kind}
    if isinstance(B, (bd.Empty, bd.Full)):
        out["dim"] = B.d
    elif isinstance(B, bd.VPoly):
        out["generators"] = _mats(B.generators)
    elif isinstance(B, bd.SpecSection):
        out["point"] = matrix_to_json(from_coords(B.point))
        out["directions"] = _mats(from_coords(r) for r in B.dirs)
        out["witness"] = None if B.witness is None else _mats(B.witness)
    elif isinstance(B, bd.Face):
        out["proj"] = matrix_to_json(B.proj)
    elif isinstance(B, (bd.JoinNode, bd.MeetNode)):
        out["left"] = body_to_json(B.left)
        out["right"] = body_to_json(B.right)
    elif isinstance(B, (bd.PreimageNode, bd.ProjectedNode)):
        out["shape"] = _shape_json(B.shape)
        out["side"] = B.side
        out["child"] = body_to_json(B.child)
    elif isinstance(B, bd.TensorNode):
        out["shape"] = _shape_json(B.shape)
        out["left"] = body_to_json(B.left)
        out["right"] = body_to_json(B.right)
    elif isinstance(B, bd.SeparableNode):
        out["shape"] = _shape_json(B.shape)
        out["p1"] = matrix_to_json(B.p1)
        out["p2"] = matrix_to_json(B.p2)
    else:
        raise InputError(f"cannot encode body kind {B.kind}")
    return _recall(B, out)


def _shape_from(obj) -> BipartiteShape:
    s = obj["shape"]
    return BipartiteShape.parse(s) if isinstance(s, str) else BipartiteShape(int(s[0]), int(s[1]))


def body_from_json(obj) -> bd.Body:
    """Rebuild a body; ``vpoly`` generators go through the usual canonicalization."""
    return _remember(_body_from_json(obj), obj)


def _section(point, dirs, witness) -> bd.Body:
    """Keep an already canonical flat as written; anything else goes through ``spec_section``."""
    d = int(round(np.sqrt(point.size)))
    D = np.asarray(dirs, dtype=float).reshape(-1, d * d)
    canonical = (
        0 < D.shape[0] < d * d - 1
        and abs(point[0] * np.sqrt(d) - 1) <= 1e-9
        and np.abs(D[:, 0]).max() <= 1e-9
        and np.abs(D @ D.T - np.eye(D.shape[0])).max() <= 1e-9
    )
    if not canonical:
        return bd.spec_section(point, dirs, witness)
    wit = None if witness is None else tuple(check_density(w) for w in witness)
    return bd.SpecSection(d, point, D, wit)


def _body_from_json(obj) -> bd.Body:
    from . import product

    try:
        kind = obj["kind"]
        if kind == "empty":
            return bd.Empty(int(obj["dim"]))
        if kind == "full":
            return bd.Full(int(obj["dim"]))
        if kind == "vpoly":
            gens = [matrix_from_json(m) for m in obj["generators"]]
            if not gens:
                raise InputError("vpoly needs at least one generator; use kind 'empty'")
            return bd.vpoly(gens)
        if kind == "spec":
            point = to_coords(matrix_from_json(obj["point"]))
            dirs = [to_coords(matrix_from_json(m)) for m in obj.get("directions", [])]
            w = obj.get("witness")
            witness = None if w is None else [matrix_from_json(m) for m in w]
            return _section(point, dirs, witness)
        if kind == "face":
            return bd.face(matrix_from_json(obj["proj"]))
        if kind == "join":
            return bd.join(body_from_json(obj["left"]), body_from_json(obj["right"]))
        if kind == "meet":
            return bd.meet(body_from_json(obj["left"]), body_from_json(obj["right"]))
        if kind == "preimage":
            return product.tau_inv(body_from_json(obj["child"]), _shape_from(obj), int(obj["side"]))
        if kind == "projected":
            return product.tau_side(body_from_json(obj["child"]), _shape_from(obj), int(obj["side"]))
        if kind in ("tensor", "separable"):
            shape = _shape_from(obj)
            if kind == "tensor":
                left, right = body_from_json(obj["left"]), body_from_json(obj["right"])
            else:
                left = bd.face(matrix_from_json(obj["p1"]))
                right = bd.face(matrix_from_json(obj["p2"]))
            return product.lambda_(left, right, shape)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"bad body JSON: {exc!r}") from exc
    raise InputError(f"unknown body kind {kind!r}")


# lattice elements, decompositions, reports --------------------------------


def lelement_to_json(a: LElement) -> dict:
    return _recall(a, {
        "dim": a.d,
        "generators": _mats(a.generators),
        "basis": _mats(from_coords(r) for r in a.basis),
    })


def lelement_from_json(obj) -> LElement:
    """Rebuild from the generators; a stored basis must span the same subspace."""
    try:
        gens = [matrix_from_json(m) for m in obj["generators"]]
        if not gens:
            return zero(int(obj["dim"]))
        a = from_states(gens)
        if obj.get("basis") is not None:
            given = to_coords_many([matrix_from_json(m) for m in obj["basis"]])
            if given.shape[0] != a.dim:
                raise InputError(f"basis has {given.shape[0]} elements but generators span {a.dim}")
            orthonormal = np.abs(given @ given.T - np.eye(a.dim)).max() <= 1e-9
            same_span = np.abs(a.basis - (a.basis @ given.T) @ given).max() <= 1e-8
            if not same_span:
                raise InputError("basis does not span the same subspace as the generators")
            if orthonormal:
                # an orthonormal basis of the same span is kept as written
                a = LElement(a.d, given, a.generators)
        return _remember(a, obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad lattice element JSON: {exc!r}") from exc


def decomposition_to_json(dec: SeparableDecomposition) -> dict:
    return {"weights": _nums(dec.weights), "left": _mats(dec.left), "right": _mats(dec.right)}


def decomposition_from_json(obj) -> SeparableDecomposition:
    try:
        return SeparableDecomposition(
            np.asarray(obj["weights"], dtype=float),
            tuple(matrix_from_json(m) for m in obj["left"]),
            tuple(matrix_from_json(m) for m in obj["right"]),
        )
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad decomposition JSON: {exc!r}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def to_jsonable(x):
    """Plain JSON value for certificates: arrays become matrices or rounded lists."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        if x.ndim == 2 and x.shape[0] == x.shape[1]:
            return matrix_to_json(x)
        return _nums(x.real)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return _num(x)
    return x


def report_to_json(rep: PropositionClass) -> dict:
    return {"verdict": rep.verdict, "certificate": to_jsonable(rep.certificate)}


def report_from_json(obj) -> PropositionClass:
    try:
        return PropositionClass(obj["verdict"], dict(obj["certificate"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad report JSON: {exc!r}") from exc


__all__ = [
    "DIGITS", "dumps", "matrix_to_json", "matrix_from_json", "polytope_to_json", "polytope_from_json",
    "body_to_json", "body_from_json", "lelement_to_json", "lelement_from_json",
    "decomposition_to_json", "decomposition_from_json", "to_jsonable", "report_to_json",
    "report_from_json",
]
