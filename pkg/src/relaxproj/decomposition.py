"""Splitting a polyhedral projection along a subspace of the common kernel.

For a polyhedron ``C = {x : <a_i, x> <= b_i}`` and a closed linear subspace
``K`` contained in the intersection of the kernels of the normals, the
projection decomposes as

    P_C = P_K + P_D P_{Kperp},   D = C  intersect  Kperp,

where ``D`` is a nonempty polyhedron inside the (low-dimensional) orthogonal
complement. This is the mechanism that reduces problems with constraints
touching few coordinates of a large ambient space to a small working space;
here the large space is emulated by a high but finite ambient dimension.
"""

from dataclasses import dataclass

import numpy as np

from .errors import KernelContainmentError
from .geometry import AffineSubspace, Polyhedron, as_vector, complement_basis
from .projectors import project_polyhedron
from .tolerances import tol


@dataclass(frozen=True, eq=False)
class SplitPolyhedron:
    """A polyhedron together with a kernel subspace and its complement data.

    Attributes
    ----------
    C : Polyhedron
    K : AffineSubspace
        Linear subspace (base 0) with every constraint normal orthogonal to it.
    Kperp_basis : ndarray, shape (r, d)
        Orthonormal basis rows of the orthogonal complement of K.
    D : Polyhedron
        ``C intersect Kperp`` expressed in Kperp coordinates (ambient dim r).
    """

    C: Polyhedron
    K: AffineSubspace
    Kperp_basis: np.ndarray
    D: Polyhedron


def kernel_subspace(A, dim):
    """The intersection of the kernels of the rows of *A*, as a linear subspace."""
    rows = [(A[i], 0.0) for i in range(len(A))]
    from .geometry import affine_from_equalities

    sub = affine_from_equalities(rows, dim)
    # a homogeneous system is always consistent
    return AffineSubspace(np.zeros(dim), sub.basis)


def common_kernel(polyhedra):
    """Intersection of the kernels of every constraint normal across the
    collection; may be the zero subspace."""
    polyhedra = list(polyhedra)
    dims = {C.ambient_dim for C in polyhedra}
    if len(dims) != 1:
        raise ValueError("polyhedra must share one ambient dimension")
    dim = dims.pop()
    stacked = [C.A for C in polyhedra if C.n_constraints]
    A = np.vstack(stacked) if stacked else np.zeros((0, dim))
    return kernel_subspace(A, dim)


def split(C, K=None):
    """Split *C* along a kernel subspace.

    Parameters
    ----------
    C : Polyhedron
    K : AffineSubspace, optional
        A linear subspace contained in the intersection of the kernels of
        C's normals. Defaults to that full intersection, which makes the
        complement as small as possible.

    Raises
    ------
    KernelContainmentError
        If a supplied K is not orthogonal to every constraint normal, or is
        not a linear subspace (base away from 0).
    """
    if K is None:
        K = kernel_subspace(C.A, C.ambient_dim)
    else:
        if float(np.linalg.norm(K.base)) > tol.feas:
            raise KernelContainmentError("K must be a linear subspace (base 0)")
        if C.n_constraints and K.basis.shape[0]:
            overlap = np.max(np.abs(C.A @ K.basis.T) / C.row_norms[:, None])
            if overlap > tol.orth:
                raise KernelContainmentError(
                    f"K is not contained in the kernel of every normal (overlap {overlap:g})")
    comp = complement_basis(K.basis, C.ambient_dim)
    Kperp = np.array(comp) if comp else np.zeros((0, C.ambient_dim))
    # normals lie in span(Kperp), so coordinates preserve lengths and the
    # offsets carry over unchanged
    A_D = C.A @ Kperp.T if C.n_constraints else None
    D = Polyhedron(A_D, C.b if C.n_constraints else None,
                   ambient_dim=Kperp.shape[0])
    return SplitPolyhedron(C, K, Kperp, D)


def project_kernel(S, x):
    """Projection of *x* onto the K component of the split."""
    x = as_vector(x, S.C.ambient_dim)
    return S.K.basis.T @ (S.K.basis @ x)


def complement_coordinates(S, x):
    """Coordinates of the Kperp component of *x* in the stored basis."""
    x = as_vector(x, S.C.ambient_dim)
    return S.Kperp_basis @ x


def lift(S, y):
    """Embed Kperp coordinates back into the ambient space."""
    return S.Kperp_basis.T @ np.asarray(y, dtype=float)


def project_via_split(S, x):
    """Projection onto ``S.C`` computed through the splitting identity
    ``P_C x = P_K x + lift(P_D(coords(x)))``."""
    y = complement_coordinates(S, x)
    p_D, _ = project_polyhedron(S.D, y)
    return project_kernel(S, x) + lift(S, p_D)
