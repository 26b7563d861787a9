"""Feasibility sweeps and slack probes, via scipy's HiGHS linear programming.

Internal helpers. All inequality residuals are normalized by the constraint
normals, so slacks are Euclidean distances to the bounding hyperplanes.
"""

import numpy as np
from scipy.optimize import linprog

from .tolerances import tol


def _normalized(A, b, dim):
    A = np.asarray(A, dtype=float).reshape(-1, dim)
    b = np.asarray(b, dtype=float).reshape(-1)
    if A.shape[0] == 0:
        return A, b
    s = np.linalg.norm(A, axis=1)
    return A / s[:, None], b / s


def phase1(A, b, A_eq=None, b_eq=None, dim=None):
    """Minimize a shared slack ``t >= -1`` over ``a_i x - t <= b_i`` (rows
    normalized) subject to ``A_eq x = b_eq``.

    Returns ``(x, t)``; a feasible set gives ``t <= 0`` and ``-t`` is a lower
    bound (capped at 1) on the simultaneous slack of all inequalities at x.
    Returns ``(None, None)`` when even the relaxed program is infeasible
    (i.e. the equality system alone has no solution).
    """
    if dim is None:
        if A is not None and np.asarray(A).size:
            dim = np.asarray(A).shape[1]
        elif A_eq is not None and len(A_eq):
            dim = np.asarray(A_eq).shape[1]
        else:
            raise ValueError("cannot infer the ambient dimension")
    if dim == 0:
        return np.zeros(0), -1.0
    A, b = _normalized(A if A is not None else np.zeros((0, dim)),
                       b if b is not None else np.zeros(0), dim)
    m = A.shape[0]
    if m == 0 and (A_eq is None or not len(A_eq)):
        return np.zeros(dim), -1.0

    c = np.zeros(dim + 1)
    c[-1] = 1.0
    A_ub = np.hstack([A, -np.ones((m, 1))]) if m else None
    bounds = [(None, None)] * dim + [(-1.0, None)]
    eq = beq = None
    if A_eq is not None and len(A_eq):
        eq = np.hstack([np.asarray(A_eq, dtype=float).reshape(-1, dim),
                        np.zeros((len(A_eq), 1))])
        beq = np.asarray(b_eq, dtype=float).reshape(-1)
    res = linprog(c, A_ub=A_ub, b_ub=b if m else None, A_eq=eq, b_eq=beq,
                  bounds=bounds, method="highs")
    if not res.success or res.x is None:
        return None, None
    return res.x[:dim], float(res.x[-1])


def feasible_point(A, b, A_eq=None, b_eq=None, dim=None):
    """A point satisfying ``A x <= b`` and ``A_eq x = b_eq``, or ``None``.

    When the inequalities admit interior points the result lies strictly
    inside them (inradius up to 1).
    """
    x, t = phase1(A, b, A_eq, b_eq, dim)
    if x is None or t > tol.feas:
        return None
    return x


def max_slack(A, b, probe, A_eq=None, b_eq=None, dim=None, cap=1.0):
    """Maximize the (normalized) slack of inequality row *probe* over the set
    ``{A x <= b, A_eq x = b_eq}``, capped at *cap* to keep the program bounded.

    Returns ``(value, argmax)`` or ``(None, None)`` when the set is empty.
    """
    A = np.asarray(A, dtype=float)
    if dim is None:
        dim = A.shape[1]
    A, b = _normalized(A, b, dim)
    m = A.shape[0]
    c = np.zeros(dim + 1)
    c[-1] = -1.0  # maximize s
    extra = np.zeros((m, 1))
    extra[probe, 0] = 1.0
    A_ub = np.hstack([A, extra])
    bounds = [(None, None)] * dim + [(None, cap)]
    eq = beq = None
    if A_eq is not None and len(A_eq):
        eq = np.hstack([np.asarray(A_eq, dtype=float).reshape(-1, dim),
                        np.zeros((len(A_eq), 1))])
        beq = np.asarray(b_eq, dtype=float).reshape(-1)
    res = linprog(c, A_ub=A_ub, b_ub=b, A_eq=eq, b_eq=beq,
                  bounds=bounds, method="highs")
    if not res.success or res.x is None:
        return None, None
    return float(res.x[-1]), res.x[:dim]
