"""Seeded property suite over the library's algebraic laws.

Every proposition is a function ``check(rng, i, cfg) -> (ok, residual)`` run
for a number of trials.  Residuals are nonnegative violation sizes (zero when
a law holds exactly); purely boolean checks report 0 or 1.  Each proposition
draws from its own generator seeded by ``(seed, crc32(name))``, so results do
not depend on which other propositions run or in what order.
"""
from __future__ import annotations

import dataclasses
import time
import zlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import body as bd
from . import lattice as L
from . import polytope as pt
from . import product as pr
from . import sampling as S
from . import serialize as ser
from .config import get_tolerances, tolerances
from .errors import InconclusiveError
from .hermitian import (
    BipartiteShape,
    bell_state,
    basis_state,
    is_density,
    maximally_mixed,
    mix,
    partial_trace,
    proj_join,
    purity,
    support_projection,
    tensor,
    to_coords,
    to_coords_many,
    trace_inner,
    von_neumann_entropy,
)

SCHEMA = 1
EQ_TOL = 1e-8


@dataclass
class RunConfig:
    seed: int = 0
    shape: BipartiteShape = BipartiteShape(2, 2)
    tol: dict = field(default_factory=dict)
    trials: dict = field(default_factory=dict)  # per-proposition overrides
    default_trials: int | None = None  # overrides every default count when set

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        for name, v in self.tol.items():
            if not v > 0:
                raise ValueError(f"tolerance {name} must be positive")
        counts = list(self.trials.values())
        if self.default_trials is not None:
            counts.append(self.default_trials)
        if any(int(n) < 1 for n in counts):
            raise ValueError("trial counts must be at least 1")


@dataclass(frozen=True)
class Proposition:
    name: str
    module: str
    statement: str
    trials: int
    check: Callable


_REGISTRY: list[Proposition] = []


def proposition(module: str, statement: str, trials: int):
    def wrap(fn):
        _REGISTRY.append(Proposition(fn.__name__.lstrip("_"), module, statement, trials, fn))
        return fn
    return wrap


def propositions() -> list[Proposition]:
    return sorted(_REGISTRY, key=lambda p: p.name)


# helpers -------------------------------------------------------------------


def _gap(A: bd.Body, B: bd.Body) -> float:
    """Set distance between exact bodies; 1.0 when exactly one side is empty."""
    if isinstance(A, bd.Empty) and isinstance(B, bd.Empty):
        return 0.0
    if isinstance(A, bd.Empty) or isinstance(B, bd.Empty):
        return 1.0
    if isinstance(A, bd.VPoly) and isinstance(B, bd.VPoly):
        return pt.set_residual(A.poly, B.poly)
    return 0.0 if bd.equal(A, B, EQ_TOL) else 1.0


def _flag(ok) -> tuple[bool, float]:
    ok = bool(ok)
    return ok, 0.0 if ok else 1.0


def _vpolys(d: int, n: int, rng) -> list[bd.Body]:
    return [bd.vpoly(g) for g in S.random_pool_subsets(d, n, rng)]


def _dim(i: int, dims=(2, 3, 4)) -> int:
    return dims[i % len(dims)]


def _face_states(d: int, n: int, rng) -> list[np.ndarray]:
    """States supported in one random proper subspace."""
    v = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))[0][:, : int(rng.integers(1, d))]
    return [v @ S.random_state(v.shape[1], rng) @ v.conj().T for _ in range(n)]


def _random_L(d: int, rng, share: L.LElement | None = None) -> L.LElement:
    """Random element; with ``share`` it reuses some of that element's generators."""
    if share is None and rng.random() < 0.3:
        return L.face_to_L(S.random_projection(d, int(rng.integers(1, d)), rng))
    k = int(rng.integers(1, d + 1))
    if rng.random() < 0.5:
        states = _face_states(d, k, rng)
    else:
        states = [S.random_mixed(d, rng, rank=int(rng.integers(1, d))) for _ in range(k)]
    if share is not None and not share.is_zero:
        m = int(rng.integers(1, len(share.generators) + 1))
        idx = rng.choice(len(share.generators), size=m, replace=False)
        states = states[: int(rng.integers(0, k + 1))] + [share.generators[j] for j in idx]
    return L.from_states(states)


def _random_exact_body(d: int, rng) -> bd.Body:
    u = rng.random()
    if u < 0.25:
        return _vpolys(d, 1, rng)[0]
    if u < 0.5:
        return bd.vpoly(_face_states(d, int(rng.integers(1, 5)), rng))
    if u < 0.75:
        return bd.face(S.random_projection(d, int(rng.integers(1, d)), rng))
    return bd.spec_from_states(_face_states(d, 2, rng))


def _all_in(states, B: bd.Body) -> tuple[bool, int]:
    bad = sum(1 for s in states if not bd.member(B, s))
    return bad == 0, bad


# hermitian-core ------------------------------------------------------------


@proposition("hermitian-core", "trace inner product equals the coordinate dot product", 100)
def _trace_inner_coords(rng, i, cfg):
    d = _dim(i)
    a, b = S.random_hermitian(d, rng), S.random_hermitian(d, rng)
    r = abs(trace_inner(a, b) - float(to_coords(a) @ to_coords(b)))
    return r < 1e-10, r


@proposition("hermitian-core", "partial trace is linear and trace preserving", 100)
def _partial_trace_linear(rng, i, cfg):
    shape = cfg.shape
    r1, r2 = S.random_state(shape.d, rng), S.random_state(shape.d, rng)
    a = rng.random()
    m = a * r1 + (1 - a) * r2
    res = 0.0
    for keep in (1, 2):
        lhs = partial_trace(m, shape, keep)
        rhs = a * partial_trace(r1, shape, keep) + (1 - a) * partial_trace(r2, shape, keep)
        res = max(res, float(np.abs(lhs - rhs).max()), abs(np.trace(lhs).real - 1))
    return res < 1e-10, res


@proposition("hermitian-core", "mixtures of states are states", 100)
def _mix_density(rng, i, cfg):
    d = _dim(i)
    k = int(rng.integers(1, 5))
    w = rng.random(k) + 0.01
    m = mix(zip(w / w.sum(), S.random_states(d, k, rng)))
    res = max(0.0, -float(np.linalg.eigvalsh(m)[0]), abs(np.trace(m).real - 1))
    return is_density(m), res


@proposition("hermitian-core", "von Neumann entropy is concave on mixtures", 100)
def _entropy_concavity(rng, i, cfg):
    d = _dim(i)
    k = int(rng.integers(2, 5))
    w = rng.random(k) + 0.01
    w = w / w.sum()
    states = S.random_states(d, k, rng)
    gap = von_neumann_entropy(mix(zip(w, states))) - sum(p * von_neumann_entropy(s) for p, s in zip(w, states))
    res = max(0.0, -gap)
    return res <= 1e-9, res


@proposition("hermitian-core", "entropy superlevel sets are closed under mixing", 100)
def _entropy_superlevel_mixing(rng, i, cfg):
    d = _dim(i)
    a, b = S.random_state(d, rng), S.random_state(d, rng)
    t = min(von_neumann_entropy(a), von_neumann_entropy(b)) * rng.random()
    level = bd.EntropyLevel(t, d)
    p = rng.random()
    m = p * a + (1 - p) * b
    res = max(0.0, t - von_neumann_entropy(m))
    return bd.entropy_superlevel_member(level, m), res


@proposition("hermitian-core", "the support projection commutes with the state", 100)
def _support_commutes(rng, i, cfg):
    d = _dim(i)
    rho = S.random_mixed(d, rng, rank=int(rng.integers(1, d + 1)))
    p = support_projection(rho)
    r = float(np.abs(p @ rho - rho @ p).max())
    return r < 1e-9, r


# real-polytope -------------------------------------------------------------


def _polys(d: int, n: int, rng) -> list[pt.VPolytope]:
    return [pt.canonicalize(to_coords_many(g)) for g in S.random_pool_subsets(d, n, rng)]


@proposition("real-polytope", "canonicalize is idempotent", 60)
def _canonicalize_idempotent(rng, i, cfg):
    d = _dim(i)
    pts = to_coords_many(S.random_states(d, 5, rng))
    w = rng.random((3, 5))
    inner = (w / w.sum(axis=1, keepdims=True)) @ pts
    P = pt.canonicalize(np.vstack([pts, inner]))
    Q = pt.canonicalize(P.vertices)
    r = pt.set_residual(P, Q)
    return len(P) == len(Q) and r <= EQ_TOL, r


@proposition("real-polytope", "intersect and hull_union are commutative and associative", 60)
def _polytope_commutative_associative(rng, i, cfg):
    P, Q, R = _polys(_dim(i), 3, rng)
    r = max(
        pt.set_residual(pt.intersect(P, Q), pt.intersect(Q, P)),
        pt.set_residual(pt.hull_union(P, Q), pt.hull_union(Q, P)),
        pt.set_residual(pt.intersect(pt.intersect(P, Q), R), pt.intersect(P, pt.intersect(Q, R))),
        pt.set_residual(pt.hull_union(pt.hull_union(P, Q), R), pt.hull_union(P, pt.hull_union(Q, R))),
    )
    r = min(r, 1.0)
    return r <= EQ_TOL, r


@proposition("real-polytope", "intersect and hull_union absorb each other", 60)
def _polytope_absorption(rng, i, cfg):
    P, Q = _polys(_dim(i), 2, rng)
    r = max(pt.set_residual(pt.intersect(P, pt.hull_union(P, Q)), P),
            pt.set_residual(pt.hull_union(P, pt.intersect(P, Q)), P))
    r = min(r, 1.0)
    return r <= EQ_TOL, r


@proposition("real-polytope", "Caratheodory decompositions reconstruct the point", 60)
def _carath_reconstruction(rng, i, cfg):
    d = _dim(i)
    P = pt.canonicalize(to_coords_many(S.random_states(d, int(rng.integers(1, 8)), rng)))
    w = rng.random(len(P))
    x = (w / w.sum()) @ P.vertices
    terms = pt.carath_decompose(P, x)
    recon = sum(t * v for t, v in terms)
    r = float(np.abs(recon - x).max())
    ok = pt.contains(P, recon, 10 * get_tolerances().lp) and len(terms) <= P.hull.dim + 1
    return ok and r < 1e-8, r


# body ----------------------------------------------------------------------


@proposition("body", "meet is idempotent; meet and join are commutative, associative and absorptive", 60)
def _lattice_axioms(rng, i, cfg):
    A, B, C = _vpolys(_dim(i), 3, rng)
    r = max(
        _gap(bd.meet(A, A), A),
        _gap(bd.meet(A, B), bd.meet(B, A)),
        _gap(bd.join(A, B), bd.join(B, A)),
        _gap(bd.meet(bd.meet(A, B), C), bd.meet(A, bd.meet(B, C))),
        _gap(bd.join(bd.join(A, B), C), bd.join(A, bd.join(B, C))),
        _gap(bd.meet(A, bd.join(A, B)), A),
        _gap(bd.join(A, bd.meet(A, B)), A),
    )
    return r <= EQ_TOL, r


@proposition("body", "a body meets its negation in the empty body", 60)
def _non_contradiction(rng, i, cfg):
    B = _random_exact_body(_dim(i), rng)
    return _flag(isinstance(bd.meet(B, bd.neg(B)), bd.Empty))


@proposition("body", "B1 <= B2 implies neg B2 <= neg B1", 60)
def _contraposition(rng, i, cfg):
    d = _dim(i)
    B1 = _random_exact_body(d, rng)
    if isinstance(B1, bd.Face):
        B2 = bd.face(proj_join(B1.proj, S.random_projection(d, 1, rng)))
    elif isinstance(B1, bd.VPoly):
        B2 = bd.join(B1, _vpolys(d, 1, rng)[0])
    else:
        B2 = bd.join(B1, bd.singleton(S.random_state(d, rng)))
    return _flag(bd.leq(B1, B2) is True and bd.leq(bd.neg(B2), bd.neg(B1)) is True)


@proposition("body", "double negation fails on the maximally mixed singleton", 2)
def _double_negation_fails(rng, i, cfg):
    d = 2 + i % 2
    C = bd.singleton(maximally_mixed(d))
    n1 = bd.neg(C)
    n2 = bd.neg(n1)
    return _flag(isinstance(n1, bd.Empty) and isinstance(n2, bd.Full) and not bd.equal(n2, C))


@proposition("body", "every body lies between the empty and the full body", 60)
def _bounded_poset(rng, i, cfg):
    d = _dim(i)
    B = _random_exact_body(d, rng)
    if rng.random() < 0.3:
        B = bd.join(B, _random_exact_body(d, rng))
    return _flag(bd.leq(bd.Empty(d), B) is True and bd.leq(B, bd.Full(d)) is True)


@proposition("body", "face joins: convex <= subspace <= projection lattice; meets agree", 60)
def _face_order_relations(rng, i, cfg):
    d = 3
    P1 = S.random_projection(d, int(rng.integers(1, d)), rng)
    P2 = S.random_projection(d, int(rng.integers(1, d)), rng)
    F1, F2 = bd.face(P1), bd.face(P2)
    a, b = L.face_to_L(P1), L.face_to_L(P2)
    j_c = bd.join(F1, F2)
    j_l = L.to_body(L.join_L(a, b))
    j_vn = bd.face(proj_join(P1, P2))
    chain = bd.leq(j_c, j_l) is True and bd.leq(j_l, j_vn) is True
    m_c = bd.meet(F1, F2)
    m_l = L.to_body(L.meet_L(a, b))
    meets = bd.equal(m_c, m_l) and bd.equal(m_l, L.vn_to_body(L.vn_meet(L.VNElement(P1), L.VNElement(P2))))
    return _flag(chain and meets)


@proposition("body", "subspace lattice versus convex lattice: join, meet and negation orders", 60)
def _lattice_order_relations(rng, i, cfg):
    d = 2 + i % 2
    a = _random_L(d, rng)
    b = _random_L(d, rng, share=a if rng.random() < 0.5 else None)
    A, B = L.to_body(a), L.to_body(b)
    joins = bd.leq(bd.join(A, B), L.to_body(L.join_L(a, b))) is True
    try:
        meets = bd.equal(bd.meet(A, B), L.to_body(L.meet_L(a, b)))
    except InconclusiveError:
        meets = False
    negs = bd.leq(L.to_body(L.neg_L(a)), bd.neg(A)) is True
    return _flag(joins and meets and negs)


# lattice-L -----------------------------------------------------------------


@proposition("lattice-L", "L meets its negation in zero; a <= b implies neg b <= neg a", 80)
def _L_non_contradiction_contraposition(rng, i, cfg):
    d = 2 + i % 2
    a = _random_L(d, rng)
    b = L.join_L(a, _random_L(d, rng))
    try:
        nc = L.meet_L(a, L.neg_L(a)).is_zero
    except InconclusiveError:
        nc = False
    return _flag(nc and L.leq_L(a, b) and L.leq_L(L.neg_L(b), L.neg_L(a)))


@proposition("lattice-L", "every operation returns a good representative", 80)
def _good_representative(rng, i, cfg):
    d = 2 + i % 2
    a = _random_L(d, rng)
    b = _random_L(d, rng, share=a if rng.random() < 0.5 else None)
    try:
        outs = [L.join_L(a, b), L.meet_L(a, b), L.neg_L(a), L.neg_L(b)]
    except InconclusiveError:
        return False, 1.0
    shape = cfg.shape
    x = _random_L(shape.d1, rng)
    y = _random_L(shape.d2, rng)
    p = L.psi(x, y)
    outs += [p, L.tau_L(p, shape, 1), L.tau_L(p, shape, 2)]
    return _flag(all(L.is_good(o) for o in outs))


@proposition("lattice-L", "faces embed order-preservingly", 80)
def _faces_embed(rng, i, cfg):
    d = _dim(i)
    F = S.random_projection(d, int(rng.integers(1, d)), rng)
    G = proj_join(F, S.random_projection(d, 1, rng))
    return _flag(L.leq_L(L.face_to_L(F), L.face_to_L(G)))


@proposition("lattice-L", "the partial trace undoes psi against an atom", 80)
def _tau_psi_identity(rng, i, cfg):
    shape = cfg.shape
    x = _random_L(shape.d1, rng)
    y = _random_L(shape.d2, rng)
    a1 = L.atom_of(S.random_state(shape.d1, rng))
    a2 = L.atom_of(S.random_state(shape.d2, rng))
    ok = L.equal_L(L.tau_L(L.psi(x, a2), shape, 1), x) and L.equal_L(L.tau_L(L.psi(a1, y), shape, 2), y)
    return _flag(ok)


# product-maps --------------------------------------------------------------


@proposition("product-maps", "tau after lambda is the identity", 60)
def _tau_lambda_identity(rng, i, cfg):
    C1, C2 = _vpolys(cfg.shape.d1, 1, rng)[0], _vpolys(cfg.shape.d2, 1, rng)[0]
    r = pr.round_trip_residual(C1, C2, cfg.shape)
    return r < EQ_TOL, r


@proposition("product-maps", "tau is surjective via C1 tensor a fixed state", 60)
def _tau_surjectivity(rng, i, cfg):
    shape = cfg.shape
    C1 = _vpolys(shape.d1, 1, rng)[0]
    C2 = _vpolys(shape.d2, 1, rng)[0]
    r2 = S.random_state(shape.d2, rng)
    r1 = S.random_state(shape.d1, rng)
    up1 = bd.vpoly([tensor(g, r2) for g in C1.generators])
    up2 = bd.vpoly([tensor(r1, g) for g in C2.generators])
    r = max(_gap(pr.tau_side(up1, shape, 1), C1), _gap(pr.tau_side(up2, shape, 2), C2))
    return r < EQ_TOL, r


@proposition("product-maps", "tau of a meet lies in the meet of the taus, strictly on product singletons", 60)
def _tau_meet_inequality(rng, i, cfg):
    shape = cfg.shape
    pool = [S.random_product(shape, rng) for _ in range(3)] + S.random_states(shape.d, 3, rng)
    picks = [rng.choice(len(pool), size=int(rng.integers(1, 5)), replace=False) for _ in range(2)]
    C, Cp = (bd.vpoly([pool[k] for k in p]) for p in picks)
    side = 1 + i % 2
    lhs = pr.tau_side(bd.meet(C, Cp), shape, side)
    rhs = bd.meet(pr.tau_side(C, shape, side), pr.tau_side(Cp, shape, side))
    ineq = bd.leq(lhs, rhs) is True
    r1 = S.random_state(shape.d1, rng)
    a, b = bd.singleton(tensor(r1, S.random_state(shape.d2, rng))), bd.singleton(tensor(r1, S.random_state(shape.d2, rng)))
    lo = pr.tau_side(bd.meet(a, b), shape, 1)
    hi = bd.meet(pr.tau_side(a, shape, 1), pr.tau_side(b, shape, 1))
    strict = bd.leq(lo, hi) is True and bd.leq(hi, lo) is False
    return _flag(ineq and strict)


@proposition("product-maps", "X lies in the preimage of its reduction", 60)
def _tau_inv_contains_fiber(rng, i, cfg):
    shape = cfg.shape
    X = _vpolys(shape.d, 1, rng)[0]
    side = 1 + i % 2
    return _flag(bd.leq(X, pr.tau_inv(pr.tau_side(X, shape, side), shape, side)) is True)


@proposition("product-maps", "the reduction of a preimage is the original body", 20)
def _tau_tau_inv_identity(rng, i, cfg):
    shape = cfg.shape
    side = 1 + i % 2
    Y = _vpolys(shape.factor(side), 1, rng)[0]
    c = bd.compare(pr.tau_side(pr.tau_inv(Y, shape, side), shape, side), Y, seed=int(rng.integers(2**31)))
    return c.equal, c.disagreements / max(c.probes, 1)


@proposition("product-maps", "C lies in the meet of the preimages of its reductions", 60)
def _tau_inv_product_bound(rng, i, cfg):
    shape = cfg.shape
    C = _vpolys(shape.d, 1, rng)[0]
    t1, t2 = pr.tau(C, shape)
    return _flag(bd.leq(C, bd.meet(pr.tau_inv(t1, shape, 1), pr.tau_inv(t2, shape, 2))) is True)


@proposition("product-maps", "preimages preserve meets", 20)
def _tau_inv_meet(rng, i, cfg):
    shape = cfg.shape
    side = 1 + i % 2
    a, b = _vpolys(shape.factor(side), 2, rng)
    lhs = pr.tau_inv(bd.meet(a, b), shape, side)
    rhs = bd.meet(pr.tau_inv(a, shape, side), pr.tau_inv(b, shape, side))
    c = bd.compare(lhs, rhs, seed=int(rng.integers(2**31)))
    return c.equal, c.disagreements / max(c.probes, 1)


@proposition("product-maps", "the join of preimages lies in the preimage of the join", 40)
def _tau_inv_join_inclusion(rng, i, cfg):
    shape = cfg.shape
    side = 1 + i % 2
    a, b = _vpolys(shape.factor(side), 2, rng)
    J = bd.join(pr.tau_inv(a, shape, side), pr.tau_inv(b, shape, side))
    ok, bad = _all_in(bd.sample(J, 40, rng), pr.tau_inv(bd.join(a, b), shape, side))
    return ok, bad / 40


@proposition("product-maps", "distinct bodies have distinct preimages", 60)
def _tau_inv_injective(rng, i, cfg):
    shape = cfg.shape
    side = 1 + i % 2
    dk, do = shape.factor(side), shape.factor(3 - side)
    a, b = _vpolys(dk, 2, rng)
    if bd.equal(a, b):
        return True, 0.0
    # a generator of one body outside the other lifts to a separating state
    g = next((g for g in a.generators if not bd.member(b, g)), None)
    src, other = (a, b) if g is not None else (b, a)
    if g is None:
        g = next(g for g in b.generators if not bd.member(a, g))
    w = S.random_state(do, rng)
    lift = tensor(g, w) if side == 1 else tensor(w, g)
    ok = bd.member(pr.tau_inv(src, shape, side), lift) and not bd.member(pr.tau_inv(other, shape, side), lift)
    return _flag(ok)


@proposition("product-maps", "preimages of distinct states are disjoint", 40)
def _tau_inv_disjoint_fibers(rng, i, cfg):
    shape = cfg.shape
    side = 1 + i % 2
    dk = shape.factor(side)
    s1, s2 = S.random_state(dk, rng), S.random_state(dk, rng)
    M = bd.meet(pr.tau_inv(bd.singleton(s1), shape, side), pr.tau_inv(bd.singleton(s2), shape, side))
    return _flag(bd.is_empty(M))


@proposition("product-maps", "preimages are monotone", 40)
def _tau_inv_monotone(rng, i, cfg):
    shape = cfg.shape
    side = 1 + i % 2
    a, c = _vpolys(shape.factor(side), 2, rng)
    b = bd.join(a, c)
    ok, bad = _all_in(bd.sample(pr.tau_inv(a, shape, side), 40, rng), pr.tau_inv(b, shape, side))
    return ok, bad / 40


@proposition("product-maps", "lambda-tau fixes product singletons and moves entangled ones", 60)
def _lambda_tau_fixed_points(rng, i, cfg):
    shape = cfg.shape
    if i % 2 == 0:
        rho = S.random_product(shape, rng)
    else:
        rho = bell_state() if i == 1 and shape == (2, 2) else S.random_entangled_pure(shape, rng)
    out = pr.lambda_tau(bd.singleton(rho), shape)
    r = float(np.linalg.norm(out.generators[0] - rho)) if isinstance(out, bd.VPoly) and len(out.poly) == 1 else np.inf
    if i % 2 == 0:
        return r < 1e-9, r
    entangled = purity(partial_trace(rho, shape, 1)) < 1 - 1e-6
    return entangled and r > 1e-3, 0.0 if r > 1e-3 else 1e-3 - r


@proposition("product-maps", "invariant simplices are lambda-tau fixed points containing their state", 60)
def _invariant_simplex_fixed(rng, i, cfg):
    shape = cfg.shape
    w, left, right = S.random_decomposition(shape, rng)
    dec = pr.SeparableDecomposition(w, tuple(left), tuple(right))
    M = pr.invariant_simplex(dec)
    r = _gap(pr.lambda_tau(M, shape), M)
    return r < EQ_TOL and bd.member(M, dec.state), r


@proposition("product-maps", "entangled verdicts cite a non-product generator", 60)
def _entangled_certificate(rng, i, cfg):
    shape = cfg.shape
    gens = [S.random_product(shape, rng) for _ in range(int(rng.integers(0, 3)))]
    gens.append(S.random_entangled_pure(shape, rng))
    rep = pr.classify_proposition(bd.vpoly(gens), shape)
    if rep.verdict != pr.ENTANGLED:
        return False, 1.0
    g = rep.certificate["generator"]
    pure = abs(purity(g) - 1) < 1e-9
    return _flag(not pure or not pr.is_product_state(g, shape))


# cli -----------------------------------------------------------------------


@proposition("cli", "JSON emit and parse round-trip states and vpoly bodies", 60)
def _json_round_trip(rng, i, cfg):
    d = _dim(i)
    rho = S.random_state(d, rng)
    t1 = ser.dumps(ser.matrix_to_json(rho))
    back = ser.matrix_from_json(ser.json.loads(t1))
    r = float(np.abs(back - rho).max())
    B = _vpolys(d, 1, rng)[0]
    b1 = ser.dumps(ser.body_to_json(B))
    B2 = ser.body_from_json(ser.json.loads(b1))
    ok = t1 == ser.dumps(ser.matrix_to_json(back)) and b1 == ser.dumps(ser.body_to_json(B2))
    r = max(r, _gap(B, B2))
    return ok and r < 1e-10, r


# refuted laws --------------------------------------------------------------


def join_preimage_counterexample() -> dict:
    """The Bell state reduces into the hull of two basis states but no mixture of their preimages is entangled."""
    shape = BipartiteShape(2, 2)
    a, b = bd.singleton(basis_state(2, 0)), bd.singleton(basis_state(2, 1))
    rho = bell_state()
    in_lhs = bd.member(pr.tau_inv(bd.join(a, b), shape, 1), rho)
    v = bd.member_verdict(bd.join(pr.tau_inv(a, shape, 1), pr.tau_inv(b, shape, 1)), rho)
    return {
        "law": "tau_inv(a join b) == tau_inv(a) join tau_inv(b)",
        "a": "|0><0|",
        "b": "|1><1|",
        "state": "Bell",
        "in_preimage_of_join": bool(in_lhs),
        "in_join_of_preimages": bool(v.value),
        "refuted": bool(in_lhs and not v.value and not v.inconclusive),
    }


def modular_counterexample() -> dict:
    """Qubit triple where x misses b although a ∨ x meets b beyond a."""

    def bloch(x, z):
        return (np.eye(2) + x * np.array([[0, 1], [1, 0]]) + z * np.diag([1.0, -1.0])) / 2

    a = L.atom_of(maximally_mixed(2))
    b = L.from_states([maximally_mixed(2), basis_state(2, 0)])
    # three states on the chord x + z/2 = 1 of the Bloch disc, which misses the z axis
    x = L.from_states([bloch(1, 0), bloch(0.6, 0.8), bloch(0.9, 0.2)])
    lhs = L.join_L(a, L.meet_L(x, b))
    rhs = L.meet_L(L.join_L(a, x), b)
    return {
        "law": "a <= b implies a join (x meet b) == (a join x) meet b",
        "a": "atom of I/2",
        "b": "span{I/2, |0><0|}",
        "x": "span of Bloch states (1,0,0), (0.6,0,0.8), (0.9,0,0.2)",
        "lhs_dim": lhs.dim,
        "rhs_dim": rhs.dim,
        "refuted": bool(L.leq_L(a, b) and not L.equal_L(lhs, rhs)),
    }


# runner --------------------------------------------------------------------


def _rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode())])


def run_proposition(p: Proposition, cfg: RunConfig) -> dict:
    n = int(cfg.trials.get(p.name, cfg.default_trials or p.trials))
    rng = _rng(cfg.seed, p.name)
    worst, failures, errors = 0.0, 0, []
    t0 = time.perf_counter()
    for i in range(n):
        try:
            ok, r = p.check(rng, i, cfg)
        except Exception as exc:  # a crashing trial is a failed trial, reported with its error
            ok, r = False, 1.0
            errors.append(f"trial {i}: {type(exc).__name__}: {exc}")
        if not ok:
            failures += 1
        r = float(r)
        worst = max(worst, r if np.isfinite(r) else 1.0)
    entry = {
        "name": p.name,
        "module": p.module,
        "statement": p.statement,
        "trials": n,
        "passed": failures == 0,
        "failures": failures,
        "worst_residual": ser._num(worst) if worst < 1e-300 or worst >= 1e-9 else float(f"{worst:.3e}"),
        "elapsed_s": round(time.perf_counter() - t0, 3),
    }
    if errors:
        entry["errors"] = errors[:5]
    return entry


def run_suite(cfg: RunConfig, only: list[str] | None = None, progress=None) -> dict:
    props = propositions()
    if only:
        unknown = set(only) - {p.name for p in props}
        if unknown:
            raise ValueError(f"unknown propositions: {sorted(unknown)}")
        props = [p for p in props if p.name in only]
    t0 = time.perf_counter()
    entries = []
    with tolerances(**cfg.tol):
        for p in props:
            entries.append(run_proposition(p, cfg))
            if progress is not None:
                progress(entries[-1])
        refuted = [join_preimage_counterexample(), modular_counterexample()]
        tols = dataclasses.asdict(get_tolerances())
    return {
        "schema": SCHEMA,
        "seed": cfg.seed,
        "shape": f"{cfg.shape.d1}x{cfg.shape.d2}",
        "tolerances": tols,
        "passed": all(e["passed"] for e in entries),
        "propositions": entries,
        "refuted": refuted,
        "elapsed_s": round(time.perf_counter() - t0, 3),
    }


TIMING_FIELDS = ("elapsed_s",)


def strip_timing(report):
    """The report without timing fields, for determinism comparisons."""
    if isinstance(report, dict):
        return {k: strip_timing(v) for k, v in report.items() if k not in TIMING_FIELDS}
    if isinstance(report, list):
        return [strip_timing(v) for v in report]
    return report


__all__ = [
    "SCHEMA", "RunConfig", "Proposition", "propositions", "run_proposition", "run_suite",
    "join_preimage_counterexample", "strip_timing",
]
