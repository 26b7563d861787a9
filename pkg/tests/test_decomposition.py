import numpy as np
import pytest

from relaxproj import (AffineSubspace, Collection, Cyclic,
                       KernelContainmentError, Polyhedron, RandomUniform,
                       common_kernel, corpus, project_polyhedron,
                       project_via_split, run, split)
from relaxproj.decomposition import complement_coordinates, lift, project_kernel
from relaxproj import schedules
from relaxproj.tolerances import tol


def test_split_single_coordinate_constraint():
    C = Polyhedron(np.array([[-1.0, 0.0, 0.0]]), np.array([0.0]))  # x1 >= 0
    S = split(C)
    assert S.K.dim == 2
    # K = span{e2, e3}: every kernel basis vector has zero first coordinate
    assert np.max(np.abs(S.K.basis[:, 0])) <= 1e-12
    assert S.Kperp_basis.shape == (1, 3)
    assert S.D.ambient_dim == 1
    assert S.D.n_constraints == 1
    p = project_via_split(S, np.array([-2.0, 5.0, 7.0]))
    np.testing.assert_allclose(p, [0.0, 5.0, 7.0], atol=1e-12)


def test_split_no_constraints():
    C = Polyhedron(ambient_dim=3)
    S = split(C)
    assert S.K.dim == 3
    assert S.D.ambient_dim == 0
    x = np.array([1.0, -2.0, 0.5])
    np.testing.assert_allclose(project_via_split(S, x), x)


def test_split_two_constraints_r4():
    A = np.array([[1.0, 1.0, 0.0, 0.0], [1.0, -1.0, 0.0, 0.0]])
    C = Polyhedron(A, np.array([1.0, 1.0]))
    S = split(C)
    assert S.K.dim == 2
    assert S.D.ambient_dim == 2
    # kernel orthogonal to the normals, verified by direct inner products
    for a in C.A:
        for k in S.K.basis:
            assert abs(np.dot(a, k)) <= tol.orth


def test_split_supplied_subspace():
    C = Polyhedron(np.array([[1.0, 0.0, 0.0, 0.0]]), np.array([1.0]))
    # a proper subspace of the kernel is allowed
    K = AffineSubspace(np.zeros(4), np.array([[0.0, 1.0, 0.0, 0.0]]))
    S = split(C, K)
    assert S.D.ambient_dim == 3
    rng = np.random.default_rng(2)
    for _ in range(10):
        x = rng.normal(size=4) * 3.0
        direct, _ = project_polyhedron(C, x)
        assert np.linalg.norm(project_via_split(S, x) - direct) <= 10 * tol.feas


def test_split_rejects_bad_subspace():
    C = Polyhedron(np.array([[1.0, 0.0]]), np.array([0.0]))
    bad = AffineSubspace(np.zeros(2), np.array([[1.0, 0.0]]))
    with pytest.raises(KernelContainmentError):
        split(C, bad)
    shifted = AffineSubspace(np.array([1.0, 1.0]), np.zeros((0, 2)))
    with pytest.raises(KernelContainmentError):
        split(C, shifted)


def test_splitting_identity_on_corpus():
    rng = np.random.default_rng(31)
    for poly in corpus.standard_corpus(seed=9, count=8, max_dim=4, max_constraints=8):
        embedded, _ = corpus.embed_polyhedron(rng, poly, 12)
        S = split(embedded)
        assert S.Kperp_basis.shape[0] <= embedded.n_constraints
        for _ in range(10):
            x = rng.normal(size=12) * 3.0
            direct, _ = project_polyhedron(embedded, x)
            via = project_via_split(S, x)
            assert np.linalg.norm(via - direct) <= 10.0 * tol.feas


def test_common_kernel_disjoint_supports():
    A1 = np.zeros((2, 5))
    A1[:, :2] = [[1.0, 0.0], [0.0, 1.0]]
    A2 = np.zeros((1, 5))
    A2[0, 1] = -1.0
    K = common_kernel([Polyhedron(A1, np.ones(2)), Polyhedron(A2, np.ones(1))])
    assert K.dim == 3
    for k in K.basis:
        assert np.max(np.abs(k[:2])) <= 1e-12


def test_common_kernel_full_rank_normals():
    rng = np.random.default_rng(6)
    C = corpus.random_polyhedron(rng, 3, 5)
    K = common_kernel([C])
    assert K.dim == 0


def test_common_kernel_direct_orthogonality():
    rng = np.random.default_rng(7)
    polys = [corpus.embed_polyhedron(rng, corpus.simplex(2), 8)[0],
             corpus.embed_polyhedron(rng, corpus.box([0.0], [1.0]), 8)[0]]
    K = common_kernel(polys)
    for C in polys:
        for a in C.A:
            for k in K.basis:
                assert abs(np.dot(a, k)) <= tol.orth


def test_orbit_decomposition():
    # the orbit on the embedded polyhedra equals the kernel part of the start
    # point plus the lifted orbit on the complement parts, step by step
    rng = np.random.default_rng(41)
    big_dim = 12
    polys = [corpus.embed_polyhedron(rng, p, big_dim)[0]
             for p in corpus.standard_corpus(seed=3, count=3, max_dim=3,
                                             max_constraints=5)]
    K = common_kernel(polys)
    splits = [split(C, K) for C in polys]
    Kperp = splits[0].Kperp_basis
    D_col = Collection(tuple(S.D for S in splits))
    C_col = Collection(tuple(polys))

    x0 = rng.normal(size=big_dim) * 2.0
    sched = schedules.random_uniform(1.8, seed=99)
    T_full = run(C_col, RandomUniform(7), sched, x0, 200)

    k0 = project_kernel(splits[0], x0)
    y0 = complement_coordinates(splits[0], x0)
    sched2 = schedules.random_uniform(1.8, seed=99)
    T_small = run(D_col, RandomUniform(7), sched2, y0, 200)

    for n in range(201):
        recomposed = k0 + Kperp.T @ T_small.iterates[n]
        assert np.linalg.norm(recomposed - T_full.iterates[n]) <= 1e-7
