import numpy as np
import pytest

from relaxproj import (EmptyPolyhedronError, FaceCapError, PointNotInSetError,
                       Polyhedron, corpus, enumerate_faces,
                       face_of_projection, minimal_face, partition_check,
                       project_affine, project_polyhedron)
from relaxproj.tolerances import tol

from oracles import refined_grid_project

UNIT_SQUARE = corpus.box([0.0, 0.0], [1.0, 1.0])
# box ordering: x <= 1, y <= 1, -x <= 0, -y <= 0
RIGHT, TOP, LEFT, BOTTOM = 0, 1, 2, 3


def test_enumerate_whole_space():
    lat = enumerate_faces(Polyhedron(ambient_dim=2))
    assert len(lat) == 1
    assert lat.faces[0].dim == 2
    assert lat.faces[0].active == frozenset()


def test_enumerate_unit_square():
    # hand enumeration: the square, 4 edges, 4 vertices
    lat = enumerate_faces(UNIT_SQUARE)
    assert len(lat) == 9
    assert lat.dims() == [0, 0, 0, 0, 1, 1, 1, 1, 2]
    expected = {
        frozenset(),
        frozenset({RIGHT}), frozenset({TOP}), frozenset({LEFT}), frozenset({BOTTOM}),
        frozenset({RIGHT, TOP}), frozenset({RIGHT, BOTTOM}),
        frozenset({LEFT, TOP}), frozenset({LEFT, BOTTOM}),
    }
    assert {f.active for f in lat} == expected


def test_enumerate_halfplane():
    C = Polyhedron(np.array([[-1.0, 0.0]]), np.array([0.0]))
    lat = enumerate_faces(C)
    assert len(lat) == 2
    assert lat.dims() == [1, 2]


def test_enumerate_implicit_equality():
    # two opposing halfspaces: a line written as a polyhedron; the only faces
    # are the line itself (both constraints implicitly tight)
    C = corpus.hyperplane_strip(np.array([0.0, 1.0]), 0.0)
    lat = enumerate_faces(C)
    assert len(lat) == 1
    face = lat.faces[0]
    assert face.active == frozenset({0, 1})
    assert face.dim == 1


def test_enumerate_degenerate_vertex():
    # three constraints meeting at the origin: x <= 0, y <= 0, -x - y <= 0
    # the origin is a vertex whose signature needs all three indices
    C = Polyhedron(np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]]),
                   np.zeros(3))
    lat = enumerate_faces(C)
    dims = lat.dims()
    assert dims[0] == 0  # the origin appears as a face
    vertex = [f for f in lat if f.dim == 0][0]
    assert vertex.active == frozenset({0, 1, 2})


def test_enumerate_cap_and_empty():
    rng = np.random.default_rng(0)
    big = corpus.random_polyhedron(rng, 3, 13)
    with pytest.raises(FaceCapError):
        enumerate_faces(big)
    empty = Polyhedron(np.array([[1.0], [-1.0]]), np.array([0.0, -1.0]))
    with pytest.raises(EmptyPolyhedronError):
        enumerate_faces(empty)


def test_minimal_face_examples():
    interior = minimal_face(UNIT_SQUARE, np.array([0.5, 0.5]))
    assert interior.active == frozenset()
    assert interior.dim == 2

    vertex = minimal_face(UNIT_SQUARE, np.array([0.0, 0.0]))
    assert vertex.active == frozenset({LEFT, BOTTOM})
    assert vertex.dim == 0

    edge = minimal_face(UNIT_SQUARE, np.array([0.0, 0.5]))
    assert edge.active == frozenset({LEFT})
    assert edge.dim == 1
    # cross-check against the enumerated lattice
    lat = enumerate_faces(UNIT_SQUARE)
    assert lat.by_signature(edge.active) is not None


def test_minimal_face_requires_membership():
    with pytest.raises(PointNotInSetError):
        minimal_face(UNIT_SQUARE, np.array([2.0, 0.5]))


def test_minimal_face_signature_in_lattice():
    rng = np.random.default_rng(4)
    for C in [UNIT_SQUARE, corpus.simplex(2), corpus.simplex(3),
              corpus.hyperplane_strip(np.array([1.0, 2.0]), 1.0, width=0.5)]:
        lat = enumerate_faces(C)
        signatures = {f.active for f in lat}
        for _ in range(25):
            c, _ = project_polyhedron(C, rng.normal(size=C.ambient_dim) * 2.0)
            face = minimal_face(C, c)
            assert face.active in signatures
            # strict slack outside the active set
            res = C.residuals(c)
            for i in range(C.n_constraints):
                if i not in face.active:
                    assert res[i] < -tol.act


def test_face_of_projection_member():
    x = np.array([0.25, 0.75])
    face, p = face_of_projection(UNIT_SQUARE, x)
    np.testing.assert_allclose(p, x)
    assert face.active == frozenset()


def test_face_of_projection_halfspace():
    C = Polyhedron(np.array([[0.0, 1.0]]), np.array([0.0]))  # y <= 0
    face, p = face_of_projection(C, np.array([3.0, 2.0]))
    np.testing.assert_allclose(p, [3.0, 0.0], atol=1e-12)
    assert face.active == frozenset({0})
    assert face.dim == 1


def test_face_of_projection_square_edge():
    x = np.array([2.0, 0.5])
    face, p = face_of_projection(UNIT_SQUARE, x)
    np.testing.assert_allclose(p, [1.0, 0.5], atol=1e-12)
    assert face.active == frozenset({RIGHT})
    oracle = refined_grid_project(UNIT_SQUARE.A, UNIT_SQUARE.b, x,
                                  lo=np.array([0.0, 0.0]), hi=np.array([1.0, 1.0]),
                                  coarse=1e-2, fine=1e-4)
    assert np.linalg.norm(oracle - p) <= 1e-3


def test_face_hull_reduction_on_corpus():
    rng = np.random.default_rng(21)
    for C in corpus.standard_corpus(seed=5, count=8, max_dim=4, max_constraints=8):
        for _ in range(20):
            x = rng.normal(size=C.ambient_dim) * 3.0
            p, _ = project_polyhedron(C, x)
            face = minimal_face(C, p)
            q = project_affine(face.hull, x)
            assert np.linalg.norm(q - p) <= 10.0 * tol.feas


def test_partition_unit_square_samples():
    rng = np.random.default_rng(17)
    samples = [rng.uniform(0.0, 1.0, size=2) for _ in range(60)]
    # boundary-heavy samples: project points from outside
    samples += [project_polyhedron(UNIT_SQUARE, rng.normal(size=2) * 3.0)[0]
                for _ in range(40)]
    report = partition_check(UNIT_SQUARE, samples)
    assert report.n_samples == 100
    assert report.ok


def test_partition_halfspace_boundary():
    C = Polyhedron(np.array([[-1.0, 0.0]]), np.array([0.0]))  # x >= 0
    lat = enumerate_faces(C)
    boundary = lat.by_signature({0})
    samples = [np.array([0.0, t]) for t in np.linspace(-3, 3, 7)]
    report = partition_check(C, samples)
    assert report.ok
    for s in samples:
        assert boundary.contains_in_relative_interior(s)


def test_partition_singleton():
    C = corpus.singleton_box(np.array([0.0, 0.0]))
    assert C.n_constraints == 4
    report = partition_check(C, [np.array([0.0, 0.0])])
    assert report.ok
    lat = enumerate_faces(C)
    assert len(lat) == 1
    assert lat.faces[0].dim == 0


def test_partition_detects_outsider():
    report = partition_check(UNIT_SQUARE, [np.array([5.0, 5.0])])
    assert not report.ok
    assert report.violations == ((0, 0),)


def test_face_witnesses_lie_in_relative_interior():
    for C in [UNIT_SQUARE, corpus.simplex(3), corpus.orthant(2),
              corpus.singleton_box(np.array([1.0, -2.0]))]:
        for face in enumerate_faces(C):
            assert C.contains(face.witness, tolerance=1e-7)
            assert face.parent.active_set(face.witness) == face.active
