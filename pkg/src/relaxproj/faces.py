"""Faces of polyhedra: enumeration, minimal faces, and the reduction of a
polyhedral projection to a projection onto the affine hull of a face.

A face is identified by its *full* active signature: the set of constraint
indices that hold with equality everywhere on the face. Two candidate active
sets describing the same face share that signature, which makes
deduplication exact. The affine hull of the face is the solution set of the
signature's equality system.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (EmptyPolyhedronError, FaceCapError, NumericalError,
                     PointNotInSetError)
from .feasibility import feasible_point, max_slack, phase1
from .geometry import Polyhedron
from .projectors import project_affine, project_polyhedron
from .tolerances import tol

FACE_ENUMERATION_CAP = 12


@dataclass(frozen=True, eq=False)
class Face:
    """A nonempty face of a polyhedron.

    Attributes
    ----------
    parent : Polyhedron
    active : frozenset of int
        Constraint indices tight on the whole face (the face's signature).
    hull : AffineSubspace
        Affine hull of the face.
    witness : ndarray
        A point in the relative interior of the face.
    """

    parent: Polyhedron
    active: frozenset
    hull: object
    witness: np.ndarray

    @property
    def dim(self):
        return self.hull.dim

    def contains_in_relative_interior(self, c):
        """Whether *c* lies in the relative interior of this face: a member of
        the parent with exactly this face's constraints active."""
        if not self.parent.contains(c):
            return False
        return self.parent.active_set(c) == self.active

    def __repr__(self):
        return f"Face(dim={self.dim}, active={sorted(self.active)})"


@dataclass(frozen=True, eq=False)
class FaceLattice:
    """All faces of a polyhedron, deduplicated by signature."""

    polyhedron: Polyhedron
    faces: tuple

    def __len__(self):
        return len(self.faces)

    def __iter__(self):
        return iter(self.faces)

    def by_signature(self, active):
        key = frozenset(active)
        for f in self.faces:
            if f.active == key:
                return f
        return None

    def dims(self):
        return sorted(f.dim for f in self.faces)


def _face_of_subset(C, J):
    """Resolve subset *J* to (signature, witness) of the face C_J, or None when
    C_J is empty. The witness lies in the relative interior."""
    J = sorted(J)
    rest = [i for i in range(C.n_constraints) if i not in J]
    A_eq = C.A[J] if J else None
    b_eq = C.b[J] if J else None
    x, t = phase1(C.A[rest], C.b[rest], A_eq, b_eq, dim=C.ambient_dim)
    if x is None or t > tol.feas:
        return None
    if -t > tol.act:
        # a point with simultaneous slack on every remaining constraint:
        # no implicit equalities
        return frozenset(J), x
    implicit = []
    witnesses = []
    for k, i in enumerate(rest):
        s, arg = max_slack(C.A[rest], C.b[rest], k, A_eq, b_eq, dim=C.ambient_dim)
        if s is None:
            return None
        if s <= tol.act:
            implicit.append(i)
        else:
            witnesses.append(arg)
    witness = np.mean(witnesses, axis=0) if witnesses else x
    return frozenset(J) | frozenset(implicit), witness


def enumerate_faces(C, cap=FACE_ENUMERATION_CAP):
    """All faces of a nonempty polyhedron.

    Every subset of the constraints is resolved to the face it generates
    (when nonempty) and deduplicated by signature. Exponential in the number
    of constraints, hence the cap.

    Raises
    ------
    FaceCapError
        More constraints than *cap*.
    EmptyPolyhedronError
        The polyhedron itself is empty.
    """
    m = C.n_constraints
    if m > cap:
        raise FaceCapError(f"{m} constraints exceed the enumeration cap {cap}")
    if feasible_point(C.A, C.b, dim=C.ambient_dim) is None:
        raise EmptyPolyhedronError("cannot enumerate faces of an empty polyhedron")
    found = {}
    for size in range(m + 1):
        for J in combinations(range(m), size):
            if C.equality_subsystem(J) is None:
                continue
            resolved = _face_of_subset(C, J)
            if resolved is None:
                continue
            signature, witness = resolved
            if signature in found:
                continue
            hull = C.equality_subsystem(signature)
            if hull is None:
                raise NumericalError(
                    f"signature {sorted(signature)} inconsistent on a nonempty face")
            found[signature] = Face(C, signature, hull, witness)
    faces = sorted(found.values(), key=lambda f: (f.dim, sorted(f.active)))
    return FaceLattice(C, tuple(faces))


def minimal_face(C, c):
    """The unique face of *C* containing *c* in its relative interior.

    Its signature is the active set at *c*; every other constraint is slack
    at *c*, so the equality system of the active set is tight exactly on the
    face and its solution set is the face's affine hull.
    """
    c = np.asarray(c, dtype=float)
    if not C.contains(c):
        raise PointNotInSetError("the point is not in the polyhedron")
    active = C.active_set(c)
    hull = C.equality_subsystem(active)
    if hull is None:
        raise NumericalError(
            f"active set {sorted(active)} at the point is numerically inconsistent")
    return Face(C, active, hull, c.copy())


def face_of_projection(C, x):
    """Project *x* onto *C* and return the face that carries the projection.

    The projection equals the projection onto the affine hull of the minimal
    face at the projected point; this identity is verified to ``10 * tol.feas``
    before returning.

    Returns
    -------
    (face, p) : (Face, ndarray)
    """
    p, _ = project_polyhedron(C, x)
    face = minimal_face(C, p)
    via_hull = project_affine(face.hull, x)
    gap = float(np.linalg.norm(via_hull - p))
    if gap > 10.0 * tol.feas:
        raise NumericalError(
            f"projection disagrees with its face-hull reduction by {gap:g}")
    return face, p


@dataclass(frozen=True)
class PartitionReport:
    n_samples: int
    violations: tuple  # (sample index, number of faces containing it in ri)

    @property
    def ok(self):
        return not self.violations


def partition_check(C, samples):
    """Verify that the relative interiors of the faces partition the
    polyhedron: each sample must lie in the relative interior of exactly one
    face."""
    samples = list(samples)
    lattice = enumerate_faces(C)
    violations = []
    for idx, c in enumerate(samples):
        count = sum(1 for f in lattice if f.contains_in_relative_interior(c))
        if count != 1:
            violations.append((idx, count))
    return PartitionReport(len(samples), tuple(violations))
