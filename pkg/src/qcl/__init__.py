"""Quantum logic on convex sets of density matrices.

Propositions are convex sets of states.  The package provides the state
toolkit (:mod:`qcl.hermitian`), exact polytopes (:mod:`qcl.polytope`),
convex bodies with meet, join and negation (:mod:`qcl.body`), the lattice of
subspace sections (:mod:`qcl.lattice`), the bipartite product and reduction
maps with a separability classifier (:mod:`qcl.product`), and a seeded
property suite (:mod:`qcl.suite`) behind the ``qcl`` command.
"""
from .config import Tolerances, get_tolerances, set_tolerances, tol, tolerances
from .errors import (
    DimensionError,
    InconclusiveError,
    InputError,
    NeedsWitnessError,
    NotADensityMatrix,
    NotAMemberError,
    PreconditionError,
    QCLError,
    UnsupportedBodyError,
)
from .hermitian import BipartiteShape

__version__ = "0.1.0"

__all__ = [
    "Tolerances", "get_tolerances", "set_tolerances", "tol", "tolerances",
    "DimensionError", "InconclusiveError", "InputError", "NeedsWitnessError", "NotADensityMatrix",
    "NotAMemberError", "PreconditionError", "QCLError", "UnsupportedBodyError", "BipartiteShape",
]
