"""Vectors, affine subspaces, halfspaces and polyhedra.

Vectors are plain 1-D ``numpy`` arrays of finite floats. The constructors
here validate their inputs once; all downstream code treats the objects as
immutable and shares them freely.
"""

from dataclasses import dataclass

import numpy as np

from .tolerances import tol


def as_vector(values, dim=None):
    """Coerce *values* to a finite float vector, optionally checking its length."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    if dim is not None and v.shape[0] != dim:
        raise ValueError(f"expected dimension {dim}, got {v.shape[0]}")
    return v


def inner(u, v):
    """Euclidean inner product of two vectors of equal dimension."""
    u = as_vector(u)
    v = as_vector(v)
    if u.shape[0] != v.shape[0]:
        raise ValueError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")
    return float(np.dot(u, v))


def norm(u):
    return float(np.linalg.norm(as_vector(u)))


def orthonormalize(vectors):
    """Orthonormal basis of the span of *vectors*.

    Modified Gram-Schmidt with a second re-orthogonalization pass, so the
    output satisfies ``|<b_i, b_j> - delta_ij| <= tol.orth``. Directions whose
    residual after orthogonalization falls below ``tol.rank`` relative to the
    largest input norm are dropped, so the output length is the numerical rank
    of the span. An empty input yields an empty list.
    """
    vecs = [as_vector(v) for v in vectors]
    if not vecs:
        return []
    dims = {v.shape[0] for v in vecs}
    if len(dims) != 1:
        raise ValueError("vectors must share one dimension")
    scale = max(np.linalg.norm(v) for v in vecs)
    if scale == 0.0:
        return []
    basis = []
    for v in vecs:
        r = v.copy()
        for _ in range(2):  # "twice is enough" re-orthogonalization
            for b in basis:
                r -= np.dot(r, b) * b
        rn = np.linalg.norm(r)
        if rn > tol.rank * scale:
            basis.append(r / rn)
    return basis


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    """A closed affine subspace stored as a base point plus an orthonormal
    basis of its direction space.

    ``basis`` has shape ``(k, d)`` with orthonormal rows; ``k = 0`` describes
    a singleton. Projection onto the subspace is then a direct formula, see
    :func:`relaxproj.projectors.project_affine`.
    """

    base: np.ndarray
    basis: np.ndarray

    def __init__(self, base, basis):
        base = as_vector(base)
        basis = np.asarray(basis, dtype=float)
        if basis.size == 0:
            basis = np.zeros((0, base.shape[0]))
        if basis.ndim != 2 or basis.shape[1] != base.shape[0]:
            raise ValueError("basis must be a (k, d) array matching the base point")
        gram = basis @ basis.T
        if gram.size and np.max(np.abs(gram - np.eye(basis.shape[0]))) > tol.orth:
            raise ValueError("basis rows are not orthonormal within tolerance")
        basis = basis.copy()
        basis.setflags(write=False)
        base = base.copy()
        base.setflags(write=False)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "basis", basis)

    @property
    def ambient_dim(self):
        return self.base.shape[0]

    @property
    def dim(self):
        return self.basis.shape[0]

    @classmethod
    def span(cls, base, directions):
        """Subspace through *base* spanned by (not necessarily orthonormal) directions."""
        basis = orthonormalize(directions)
        base = as_vector(base)
        return cls(base, np.array(basis) if basis else np.zeros((0, base.shape[0])))

    @classmethod
    def whole_space(cls, dim):
        return cls(np.zeros(dim), np.eye(dim))

    @classmethod
    def singleton(cls, point):
        point = as_vector(point)
        return cls(point, np.zeros((0, point.shape[0])))

    def contains(self, x, tolerance=None):
        """Whether *x* lies in the subspace, up to the feasibility tolerance."""
        x = as_vector(x, self.ambient_dim)
        r = x - self.base
        r = r - self.basis.T @ (self.basis @ r)
        return float(np.linalg.norm(r)) <= (tol.feas if tolerance is None else tolerance)

    def equality_rows(self):
        """Equality form: rows ``(u, <u, base>)`` with *u* spanning the orthogonal
        complement of the direction space. A point lies in the subspace iff it
        satisfies every row."""
        comp = complement_basis(self.basis, self.ambient_dim)
        return [(u, float(np.dot(u, self.base))) for u in comp]


def complement_basis(basis, dim):
    """Orthonormal basis (list of rows) of the orthogonal complement of the row
    space of ``basis`` inside R^dim."""
    basis = np.asarray(basis, dtype=float).reshape(-1, dim) if dim else np.zeros((0, 0))
    if dim == 0:
        return []
    if basis.shape[0] == 0:
        return list(np.eye(dim))
    from scipy.linalg import null_space

    ns = null_space(basis, rcond=tol.rank)
    return [ns[:, j] for j in range(ns.shape[1])]


@dataclass(frozen=True, eq=False)
class Halfspace:
    """The set ``{x : <normal, x> <= offset}``; the normal must be nonzero."""

    normal: np.ndarray
    offset: float

    def __init__(self, normal, offset):
        normal = as_vector(normal)
        if np.linalg.norm(normal) == 0.0:
            raise ValueError("halfspace normal must be nonzero")
        normal = normal.copy()
        normal.setflags(write=False)
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(offset))

    @property
    def ambient_dim(self):
        return self.normal.shape[0]


class Polyhedron:
    """Intersection of finitely many closed halfspaces ``A x <= b``.

    An empty constraint list describes the whole space (then ``ambient_dim``
    must be given). The constraint matrix is kept exactly as supplied; all
    tolerance checks downstream use row-normalized residuals, i.e. Euclidean
    distances to the bounding hyperplanes.
    """

    def __init__(self, A=None, b=None, ambient_dim=None):
        if A is None:
            A = np.zeros((0, ambient_dim if ambient_dim else 0))
        A = np.asarray(A, dtype=float)
        if A.ndim != 2:
            raise ValueError("A must be a 2-D array")
        b = np.zeros(A.shape[0]) if b is None else np.asarray(b, dtype=float).reshape(-1)
        if b.shape[0] != A.shape[0]:
            raise ValueError("A and b must have matching row counts")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("constraint entries must be finite")
        if ambient_dim is None:
            if A.shape[0] == 0:
                raise ValueError("ambient_dim is required for an unconstrained polyhedron")
            ambient_dim = A.shape[1]
        elif A.shape[0] > 0 and A.shape[1] != ambient_dim:
            raise ValueError(f"normals have dimension {A.shape[1]}, expected {ambient_dim}")
        else:
            A = A.reshape(A.shape[0], ambient_dim)
        row_norms = np.linalg.norm(A, axis=1)
        if np.any(row_norms == 0.0):
            raise ValueError("every constraint normal must be nonzero")
        self.A = A
        self.b = b
        self.ambient_dim = int(ambient_dim)
        self.row_norms = row_norms
        # row-normalized copies: residuals against them are Euclidean distances
        self.unit_A = A / row_norms[:, None] if A.shape[0] else A
        self.unit_b = b / row_norms if A.shape[0] else b
        # cache: active index set -> AffineSubspace | None (inconsistent equalities)
        self._hull_cache = {}
        for arr in (self.A, self.b, self.row_norms, self.unit_A, self.unit_b):
            arr.setflags(write=False)

    @classmethod
    def from_halfspaces(cls, halfspaces, ambient_dim=None):
        halfspaces = list(halfspaces)
        if not halfspaces:
            return cls(ambient_dim=ambient_dim)
        A = np.array([h.normal for h in halfspaces], dtype=float)
        b = np.array([h.offset for h in halfspaces], dtype=float)
        return cls(A, b, ambient_dim)

    @property
    def halfspaces(self):
        return [Halfspace(self.A[i], self.b[i]) for i in range(self.n_constraints)]

    @property
    def n_constraints(self):
        return self.A.shape[0]

    def residuals(self, x):
        """Signed distances ``(<a_i, x> - b_i) / ||a_i||``; positive = violated."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.ambient_dim,):
            raise ValueError(f"expected a vector of dimension {self.ambient_dim}")
        if self.n_constraints == 0:
            return np.zeros(0)
        return self.unit_A @ x - self.unit_b

    def contains(self, x, tolerance=None):
        t = tol.feas if tolerance is None else tolerance
        r = self.residuals(x)
        return bool(r.size == 0 or np.max(r) <= t)

    def active_set(self, x, tolerance=None):
        """Indices whose constraint holds with equality at *x* (within ``tol.act``)."""
        t = tol.act if tolerance is None else tolerance
        r = self.residuals(x)
        return frozenset(int(i) for i in np.flatnonzero(np.abs(r) <= t))

    def equality_subsystem(self, indices):
        """Affine solution set of ``<a_i, x> = b_i`` over *indices*, cached.

        Returns ``None`` when the equality system is inconsistent.
        """
        data = self.face_data(indices)
        return None if data is None else data[0]

    def face_data(self, indices):
        """Cached per-active-set solve data: ``(hull, A_J^T, pinv(A_J^T))``
        for the equality system over *indices*, or ``None`` when that system
        is inconsistent. The pseudoinverse backs fast multiplier checks in
        the projector."""
        key = frozenset(int(i) for i in indices)
        hit = self._hull_cache.get(key, 0)
        if hit != 0:
            return hit
        rows = [(self.A[i], self.b[i]) for i in sorted(key)]
        hull = affine_from_equalities(rows, self.ambient_dim)
        if hull is None:
            data = None
        else:
            AJt = self.A[sorted(key)].T
            data = (hull, AJt, np.linalg.pinv(AJt))
        self._hull_cache[key] = data
        return data

    def __repr__(self):
        return f"Polyhedron({self.n_constraints} halfspaces in R^{self.ambient_dim})"


def affine_from_equalities(rows, ambient_dim):
    """Solution set of the linear system ``<a_i, x> = beta_i``.

    Parameters
    ----------
    rows : list of (vector, float)
        Coefficient rows and right-hand sides.
    ambient_dim : int
        Dimension of the ambient space.

    Returns
    -------
    AffineSubspace or None
        The solution set as base point (minimum-norm solution) plus an
        orthonormal basis of the intersection of the kernels, or ``None``
        when the system is inconsistent (least-squares residual exceeds
        ``tol.feas`` after row normalization).
    """
    rows = list(rows)
    if not rows:
        return AffineSubspace.whole_space(ambient_dim)
    A = np.array([as_vector(a, ambient_dim) for a, _ in rows], dtype=float)
    beta = np.array([float(v) for _, v in rows])
    scale = np.linalg.norm(A, axis=1)
    if np.any(scale == 0.0):
        # 0 = beta rows: drop if beta ~ 0, else inconsistent
        zero = scale == 0.0
        if np.max(np.abs(beta[zero]), initial=0.0) > tol.feas:
            return None
        A, beta, scale = A[~zero], beta[~zero], scale[~zero]
        if A.shape[0] == 0:
            return AffineSubspace.whole_space(ambient_dim)
    base, *_ = np.linalg.lstsq(A, beta, rcond=None)
    if np.max(np.abs(A @ base - beta) / scale) > tol.feas:
        return None
    from scipy.linalg import null_space

    ns = null_space(A, rcond=tol.rank)
    basis = ns.T if ns.size else np.zeros((0, ambient_dim))
    return AffineSubspace(base, basis)
