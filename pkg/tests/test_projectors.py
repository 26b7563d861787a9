import numpy as np
import pytest

from relaxproj import (AffineSubspace, EmptyPolyhedronError, EpiExp,
                       Polyhedron, RelaxedProjector, apply_relaxed, corpus,
                       project, project_affine, project_epiexp,
                       project_polyhedron)
from relaxproj.tolerances import tol

from oracles import bisect_root, grid_project, refined_grid_project

X_AXIS = AffineSubspace(np.zeros(2), np.array([[1.0, 0.0]]))


def test_project_affine_axis():
    np.testing.assert_allclose(project_affine(X_AXIS, np.array([3.0, 5.0])),
                               [3.0, 0.0])


def test_project_affine_fixes_members():
    rng = np.random.default_rng(0)
    sub = AffineSubspace.span(rng.normal(size=4),
                              [rng.normal(size=4), rng.normal(size=4)])
    x = sub.base + 0.3 * sub.basis[0] - 1.7 * sub.basis[1]
    np.testing.assert_allclose(project_affine(sub, x), x, atol=1e-12)


def test_project_affine_diagonal():
    diag = AffineSubspace.span(np.zeros(2), [np.array([1.0, 1.0])])
    p = project_affine(diag, np.array([2.0, 0.0]))
    np.testing.assert_allclose(p, [1.0, 1.0], atol=1e-12)
    # calculus oracle: minimize ||(t,t) - (2,0)||^2 over a dense grid of t
    ts = np.arange(-3.0, 3.0, 1e-4)
    dists = (ts - 2.0) ** 2 + ts ** 2
    t_best = ts[np.argmin(dists)]
    assert abs(t_best - 1.0) <= 1e-3


def test_project_affine_residual_orthogonal():
    rng = np.random.default_rng(1)
    for _ in range(20):
        d = int(rng.integers(1, 8))
        k = int(rng.integers(0, d + 1))
        sub = AffineSubspace.span(rng.normal(size=d),
                                  [rng.normal(size=d) for _ in range(k)])
        x = rng.normal(size=d) * 3.0
        p = project_affine(sub, x)
        r = x - p
        for v in sub.basis:
            assert abs(np.dot(r, v)) <= tol.feas


def test_project_polyhedron_orthant():
    C = corpus.orthant(2)
    p, active = project_polyhedron(C, np.array([-1.0, 2.0]))
    np.testing.assert_allclose(p, [0.0, 2.0], atol=1e-12)
    assert active == frozenset({0})


def test_project_polyhedron_idempotent_on_members():
    C = corpus.box([-1.0, -1.0], [1.0, 1.0])
    x = np.array([0.25, -1.0])
    p, active = project_polyhedron(C, x)
    np.testing.assert_allclose(p, x, atol=1e-12)
    assert active == C.active_set(x)


def test_project_polyhedron_simplex_grid_oracle():
    C = corpus.simplex(2)
    p, _ = project_polyhedron(C, np.array([2.0, 2.0]))
    np.testing.assert_allclose(p, [0.5, 0.5], atol=1e-12)
    oracle = refined_grid_project(C.A, C.b, np.array([2.0, 2.0]),
                                  lo=np.array([0.0, 0.0]), hi=np.array([1.0, 1.0]),
                                  coarse=1e-2, fine=1e-4)
    assert np.linalg.norm(oracle - p) <= 1e-3


def test_project_polyhedron_empty():
    C = Polyhedron(np.array([[1.0, 0.0], [-1.0, 0.0]]), np.array([0.0, -1.0]))
    with pytest.raises(EmptyPolyhedronError):
        project_polyhedron(C, np.array([5.0, 5.0]))


def test_project_polyhedron_vertex_case():
    # force a vertex-active projection (both constraints in the certificate)
    C = corpus.box([0.0, 0.0], [1.0, 1.0])
    p, active = project_polyhedron(C, np.array([2.0, 2.0]))
    np.testing.assert_allclose(p, [1.0, 1.0], atol=1e-12)
    assert active == frozenset({0, 1})


def test_project_polyhedron_grid_equivalence():
    rng = np.random.default_rng(42)
    for d, step in ((2, 5e-3), (3, 2e-2)):
        for _ in range(4):
            C = corpus.random_polyhedron(rng, d, int(rng.integers(d + 1, 7)))
            x = rng.normal(size=d) * 3.0
            p, _ = project_polyhedron(C, x)
            lo = p - 1.0
            hi = p + 1.0
            oracle = grid_project(C.A, C.b, x, lo, hi, step)
            assert oracle is not None
            assert np.linalg.norm(oracle - p) <= 10.0 * step


def test_project_epiexp_inside():
    assert project_epiexp(0.0, 3.0) == (0.0, 3.0)
    assert project_epiexp(1.0, np.exp(1.0)) == (1.0, np.exp(1.0))


def test_project_epiexp_origin_bisection_oracle():
    x, y = project_epiexp(0.0, 0.0)
    t_star = bisect_root(lambda t: t + np.exp(2.0 * t), -1.0, 0.0)
    assert abs(x - t_star) <= 1e-10
    assert abs(x - (-0.4263)) <= 1e-4
    assert abs(y - 0.6529) <= 1e-4
    assert abs(y - np.exp(x)) <= 1e-12
    # optimality oracle: no boundary point on a fine grid is closer
    ts = np.arange(-2.0, 1.0, 1e-4)
    dists = ts ** 2 + np.exp(2.0 * ts)
    assert dists.min() >= (x ** 2 + y ** 2) - 1e-6


def test_project_epiexp_residual_tolerance():
    rng = np.random.default_rng(5)
    for _ in range(50):
        x0, y0 = rng.normal(size=2) * 3.0
        x, y = project_epiexp(x0, y0)
        g = (x - x0) + np.exp(x) * (np.exp(x) - y0)
        if y0 < np.exp(x0):
            assert abs(g) <= 1e-12
            assert y == pytest.approx(np.exp(x), abs=1e-12)
        else:
            assert (x, y) == (x0, y0)


def test_relaxed_projector_examples():
    x = np.array([3.0, 5.0])
    np.testing.assert_allclose(apply_relaxed(RelaxedProjector(X_AXIS, 0.0), x), x)
    np.testing.assert_allclose(apply_relaxed(RelaxedProjector(X_AXIS, 1.0), x),
                               [3.0, 0.0])
    np.testing.assert_allclose(apply_relaxed(RelaxedProjector(X_AXIS, 2.0), x),
                               [3.0, -5.0])


def test_relaxed_projector_range_check():
    with pytest.raises(ValueError):
        RelaxedProjector(X_AXIS, 2.5)
    with pytest.raises(ValueError):
        RelaxedProjector(X_AXIS, -0.1)


def _sample_targets(rng):
    return [
        AffineSubspace.span(rng.normal(size=3), [rng.normal(size=3)]),
        corpus.random_polyhedron(rng, 3, 5),
        corpus.box([-1.0, -1.0, -1.0], [1.0, 1.0, 1.0]),
    ]


def test_idempotence_all_families():
    rng = np.random.default_rng(9)
    targets = _sample_targets(rng) + [EpiExp()]
    for target in targets:
        d = target.ambient_dim
        for _ in range(10):
            x = rng.normal(size=d) * 4.0
            p = project(target, x)
            pp = project(target, p)
            assert np.linalg.norm(pp - p) <= tol.feas * max(1.0, np.linalg.norm(p))


def test_firm_nonexpansiveness_sampled():
    rng = np.random.default_rng(10)
    targets = _sample_targets(rng) + [EpiExp()]
    for target in targets:
        d = target.ambient_dim
        for _ in range(10):
            x = rng.normal(size=d) * 3.0
            y = rng.normal(size=d) * 3.0
            px = project(target, x)
            py = project(target, y)
            lhs = np.dot(px - py, px - py)
            rhs = np.dot(px - py, x - y)
            assert lhs <= rhs + tol.feas


def test_relaxed_nonexpansive_sampled():
    rng = np.random.default_rng(11)
    targets = _sample_targets(rng)
    for target in targets:
        d = target.ambient_dim
        for _ in range(10):
            lam = rng.uniform(0.0, 2.0)
            R = RelaxedProjector(target, lam)
            x = rng.normal(size=d) * 3.0
            y = rng.normal(size=d) * 3.0
            assert (np.linalg.norm(apply_relaxed(R, x) - apply_relaxed(R, y))
                    <= np.linalg.norm(x - y) + tol.feas)


def test_variational_characterization():
    rng = np.random.default_rng(12)
    C = corpus.random_polyhedron(rng, 3, 6)
    for _ in range(10):
        x = rng.normal(size=3) * 4.0
        p, _ = project_polyhedron(C, x)
        # sample members of C by projecting random points
        for _ in range(5):
            c, _ = project_polyhedron(C, rng.normal(size=3) * 2.0)
            assert np.dot(x - p, c - p) <= tol.feas * max(1.0, np.linalg.norm(x))
