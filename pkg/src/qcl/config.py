"""Named numerical tolerances.

Every tolerance can be overridden for a block of code::

    with tolerances(psd=1e-8):
        ...
"""
from __future__ import annotations

import contextlib
import contextvars
import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-9
    tr: float = 1e-9
    psd: float = 1e-9
    # linear-program constraint residual
    lp: float = 1e-9
    # singular values kept when spanning affine hulls and subspaces
    rank: float = 1e-9
    # alternating-projection residual for conic feasibility
    feas: float = 1e-7
    # relative-interior search verdict bands
    interior_ok: float = 1e-7
    interior_empty: float = 1e-4

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"tolerance {f.name} must be positive")


_current: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "qcl_tolerances", default=Tolerances()
)


def get_tolerances() -> Tolerances:
    return _current.get()


def tol(name: str) -> float:
    return getattr(_current.get(), name)


@contextlib.contextmanager
def tolerances(**overrides: float):
    token = _current.set(dataclasses.replace(_current.get(), **overrides))
    try:
        yield _current.get()
    finally:
        _current.reset(token)


def set_tolerances(**overrides: float) -> Tolerances:
    """Change the process-wide defaults (used by the CLI)."""
    new = dataclasses.replace(_current.get(), **overrides)
    _current.set(new)
    return new
