"""Shared numerical tolerances.

All tolerance checks in the library read the module-level ``tol`` object at
call time, so overriding an attribute (directly or via :func:`override`)
affects every operation. Residuals against halfspace constraints are always
measured after normalizing by the constraint normal, i.e. tolerances compare
Euclidean distances to the bounding hyperplanes.
"""

from contextlib import contextmanager
from dataclasses import dataclass


@dataclass
class Tolerances:
    feas: float = 1e-9    # feasibility / residual checks
    orth: float = 1e-9    # orthonormality of stored bases
    rank: float = 1e-10   # rank decisions, as a ratio of singular values / pivots
    act: float = 1e-7     # declaring a constraint active at a point
    dual: float = 1e-8    # cone membership via nonnegative least squares


tol = Tolerances()

_NAMES = ("feas", "orth", "rank", "act", "dual")


def set_tolerance(name: str, value: float) -> None:
    if name not in _NAMES:
        raise KeyError(f"unknown tolerance {name!r}; known: {', '.join(_NAMES)}")
    setattr(tol, name, float(value))


@contextmanager
def override(**values: float):
    """Temporarily override tolerances; restores previous values on exit."""
    saved = {name: getattr(tol, name) for name in values}
    try:
        for name, value in values.items():
            set_tolerance(name, value)
        yield tol
    finally:
        for name, value in saved.items():
            setattr(tol, name, value)
