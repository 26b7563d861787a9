"""Orthogonal projectors onto affine subspaces, polyhedra and epi(exp),
plus their relaxed variants ``(1 - lam) Id + lam P``.

``project_polyhedron`` is the exact reference projector: it certifies its
output through the KKT conditions (primal feasibility plus cone membership
of the residual), enumerating candidate active sets by increasing size. Any
candidate passing both checks equals the unique nearest point, so the first
hit is returned.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import nnls

from .errors import EmptyPolyhedronError, NumericalError
from .feasibility import feasible_point
from .geometry import AffineSubspace, Polyhedron, as_vector
from .tolerances import tol


def project_affine(A, x):
    """Nearest point of the affine subspace *A* to *x*.

    ``base + sum <x - base, b_i> b_i`` over the orthonormal basis rows; the
    residual is orthogonal to the subspace directions by construction.
    """
    x = as_vector(x, A.ambient_dim)
    r = x - A.base
    return A.base + A.basis.T @ (A.basis @ r)


def _active_from_residuals(res):
    return frozenset(np.flatnonzero(np.abs(res) <= tol.act).tolist())


def _certified(C, data, x, Ahat, bhat):
    """Evaluate one active-set candidate: project onto its equality hull,
    then check primal feasibility and nonnegativity of the multipliers.
    Returns ``(p, residuals)`` when the candidate is the projection."""
    hull, AJt, pinvT = data
    r = x - hull.base
    p = hull.base + hull.basis.T @ (hull.basis @ r)
    p_res = Ahat @ p - bhat
    if p_res.max() > tol.feas:
        return None
    v = x - p
    thresh = tol.dual * max(1.0, float(np.linalg.norm(v)))
    mu = pinvT @ v
    if np.linalg.norm(AJt @ mu - v) <= thresh:
        if mu.size == 0 or mu.min() >= -1e-12 * max(1.0, float(np.abs(mu).max())):
            return p, p_res
    # the clean least-squares fit needs negative weights or misses: let the
    # full nonnegative solve decide the borderline
    _, resid = nnls(AJt, v)
    if resid <= thresh:
        return p, p_res
    return None


def project_polyhedron(C, x):
    """Exact projection onto a polyhedron.

    Parameters
    ----------
    C : Polyhedron
    x : vector

    Returns
    -------
    (p, active) : (ndarray, frozenset)
        The unique nearest point and the indices active at it (within
        ``tol.act``).

    Raises
    ------
    EmptyPolyhedronError
        If no candidate is certified and a feasibility sweep confirms the
        polyhedron is empty.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (C.ambient_dim,):
        raise ValueError(f"expected a vector of dimension {C.ambient_dim}")
    m = C.n_constraints
    if m == 0:
        return x.copy(), frozenset()
    Ahat = C.unit_A
    bhat = C.unit_b
    res = Ahat @ x - bhat
    if res.max() <= tol.feas:
        return x.copy(), _active_from_residuals(res)

    # single-constraint candidates, vectorized: p_i = x - res_i * ahat_i is the
    # projection onto hyperplane i, with multiplier res_i >= 0 exactly when the
    # constraint is violated at x.
    violated = np.flatnonzero(res > tol.feas)
    cand = x[None, :] - res[violated, None] * Ahat[violated]
    cand_res = cand @ Ahat.T - bhat[None, :]
    ok = np.flatnonzero((cand_res <= tol.feas).all(axis=1))
    if ok.size:
        k = ok[0]
        return cand[k], _active_from_residuals(cand_res[k])

    # orbits revisit the same face: retry the last certified active set first
    last = getattr(C, "_last_support", None)
    if last is not None and len(last) >= 2:
        data = C.face_data(last)
        if data is not None:
            hit = _certified(C, data, x, Ahat, bhat)
            if hit is not None:
                return hit[0], _active_from_residuals(hit[1])

    # general candidates by increasing active-set size
    scale = max(1.0, float(np.linalg.norm(x)))
    for size in range(2, m + 1):
        for J in combinations(range(m), size):
            data = C.face_data(J)
            if data is None:
                continue
            hit = _certified(C, data, x, Ahat, bhat)
            if hit is not None:
                C._last_support = J
                return hit[0], _active_from_residuals(hit[1])

    if feasible_point(C.A, C.b, dim=C.ambient_dim) is None:
        raise EmptyPolyhedronError(
            f"no feasible point: {C!r} has empty intersection")
    raise NumericalError(
        f"projection onto {C!r} failed to certify any candidate (point scale {scale:g})")


class EpiExp:
    """The epigraph of exp in the plane: ``{(x, y) : exp(x) <= y}``.

    A closed convex set that is not polyhedral; ambient dimension is 2.
    """

    ambient_dim = 2

    def contains(self, x, tolerance=None):
        x = as_vector(x, 2)
        t = tol.feas if tolerance is None else tolerance
        return bool(np.exp(x[0]) <= x[1] + t)

    def __repr__(self):
        return "EpiExp()"


def project_epiexp(x0, y0):
    """Project the point ``(x0, y0)`` onto the epigraph of exp.

    Points already in the epigraph are fixed. Otherwise the nearest point
    lies on the boundary curve ``(t, exp(t))`` where t is the unique root of

        g(t) = (t - x0) + exp(t) * (exp(t) - y0),

    located by expanding a bracket to the left of ``x0`` and polishing with
    safeguarded Newton steps (bisection fallback) until ``|g| <= 1e-12``.
    """
    x0 = float(x0)
    y0 = float(y0)
    with np.errstate(over="ignore"):
        if np.exp(x0) <= y0:
            return x0, y0

        def g(t):
            e = np.exp(t)
            return (t - x0) + e * (e - y0)

        def gprime(t):
            e = np.exp(t)
            return 1.0 + e * (2.0 * e - y0)

        hi = x0
        lo = x0 - abs(y0) - 2.0
        while g(lo) > 0.0:
            lo -= 2.0 * (x0 - lo) + 1.0
        t = 0.5 * (lo + hi)
        for _ in range(200):
            gt = g(t)
            if abs(gt) <= 1e-12:
                break
            if gt > 0.0:
                hi = t
            else:
                lo = t
            gp = gprime(t)
            step = gt / gp if np.isfinite(gp) and gp != 0.0 else np.inf
            t_new = t - step
            if not (lo < t_new < hi):
                t_new = 0.5 * (lo + hi)  # bisect when Newton leaves the bracket
            t = t_new
    return float(t), float(np.exp(t))


def project(target, x):
    """Nearest point of *target* to *x* (dispatch over the supported set types)."""
    if isinstance(target, AffineSubspace):
        return project_affine(target, x)
    if isinstance(target, Polyhedron):
        return project_polyhedron(target, x)[0]
    if isinstance(target, EpiExp):
        x = as_vector(x, 2)
        return np.array(project_epiexp(x[0], x[1]))
    raise TypeError(f"no projector for {type(target).__name__}")


@dataclass(frozen=True, eq=False)
class RelaxedProjector:
    """``(1 - lam) Id + lam P_target`` for a relaxation parameter in [0, 2].

    ``lam = 0`` is the identity, ``lam = 1`` the projection, ``lam = 2`` the
    reflection.
    """

    target: object
    lam: float

    def __post_init__(self):
        if not 0.0 <= self.lam <= 2.0:
            raise ValueError(f"relaxation parameter {self.lam} outside [0, 2]")

    def __call__(self, x):
        return apply_relaxed(self, x)


def apply_relaxed(R, x):
    """Evaluate a relaxed projector at *x*."""
    x = as_vector(x)
    return (1.0 - R.lam) * x + R.lam * project(R.target, x)


def reflect(target, x):
    """The reflector ``2 P - Id`` across *target*."""
    return apply_relaxed(RelaxedProjector(target, 2.0), x)
