"""Seeded generators of polyhedral test instances.

Every builder is deterministic given the rng/seed, so downstream stress
runs and regression bounds are reproducible.
"""

import numpy as np

from .geometry import Polyhedron


def box(lo, hi):
    """Axis-aligned box ``lo <= x <= hi`` (componentwise)."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    d = len(lo)
    A = np.vstack([np.eye(d), -np.eye(d)])
    b = np.concatenate([hi, -lo])
    return Polyhedron(A, b)


def simplex(dim, scale=1.0):
    """``{x >= 0, sum x <= scale}``."""
    A = np.vstack([-np.eye(dim), np.ones((1, dim))])
    b = np.concatenate([np.zeros(dim), [float(scale)]])
    return Polyhedron(A, b)


def orthant(dim):
    """The nonnegative orthant."""
    return Polyhedron(-np.eye(dim), np.zeros(dim))


def hyperplane_strip(normal, offset, width=0.0):
    """``offset - width <= <normal, x> <= offset``; width 0 gives a hyperplane
    written with two opposing halfspaces (an implicit equality)."""
    normal = np.asarray(normal, dtype=float)
    A = np.vstack([normal, -normal])
    b = np.array([float(offset), float(width) - float(offset)])
    return Polyhedron(A, b)


def singleton_box(point):
    """The single point *point* cut out by opposing coordinate constraints."""
    point = np.asarray(point, dtype=float)
    return box(point, point)


def random_polyhedron(rng, dim, n_constraints, center_scale=1.0,
                      min_slack=0.2, max_slack=1.5):
    """A nonempty random polyhedron: unit normals drawn on the sphere, offsets
    leaving a random center strictly feasible with slack in
    ``[min_slack, max_slack]``."""
    A = rng.normal(size=(n_constraints, dim))
    A /= np.linalg.norm(A, axis=1, keepdims=True)
    center = rng.normal(size=dim) * center_scale
    b = A @ center + rng.uniform(min_slack, max_slack, size=n_constraints)
    return Polyhedron(A, b)


def random_cone(rng, dim, n_constraints):
    """A polyhedral cone ``{<a_i, x> <= 0}`` with apex at the origin."""
    A = rng.normal(size=(n_constraints, dim))
    A /= np.linalg.norm(A, axis=1, keepdims=True)
    return Polyhedron(A, np.zeros(n_constraints))


def standard_corpus(seed=20260810, count=24, max_dim=6, max_constraints=10):
    """A mixed corpus of nonempty polyhedra: boxes, simplices, random
    full-dimensional sets, cones, strips with implicit equalities, singletons
    and unbounded sets. Deterministic for a given seed."""
    rng = np.random.default_rng(seed)
    out = []
    builders = [
        lambda d: box(-rng.uniform(0.5, 2.0, d), rng.uniform(0.5, 2.0, d)),
        lambda d: simplex(d, scale=rng.uniform(0.5, 3.0)),
        lambda d: random_polyhedron(rng, d, min(max_constraints,
                                                int(rng.integers(d, max_constraints + 1)))),
        lambda d: random_cone(rng, d, min(max_constraints, d + 1)),
        lambda d: hyperplane_strip(rng.normal(size=d), rng.normal(),
                                   width=float(rng.choice([0.0, 0.3]))),
        lambda d: singleton_box(rng.normal(size=d)),
        lambda d: random_polyhedron(rng, d, 2),  # unbounded
    ]
    i = 0
    while len(out) < count:
        d = int(rng.integers(2, max_dim + 1))
        poly = builders[i % len(builders)](d)
        if poly.n_constraints <= max_constraints:
            out.append(poly)
        i += 1
    return out


def embed_polyhedron(rng, poly, big_dim):
    """Re-express *poly* in a larger space by mapping its coordinates onto a
    random sorted subset of the big space's axes; normals keep their norms
    and stay supported on few coordinates."""
    d = poly.ambient_dim
    coords = np.sort(rng.choice(big_dim, size=d, replace=False))
    A = np.zeros((poly.n_constraints, big_dim))
    A[:, coords] = poly.A
    return Polyhedron(A, poly.b.copy(), ambient_dim=big_dim), coords


def random_points(rng, dim, count, scale=3.0):
    return [rng.normal(size=dim) * scale for _ in range(count)]


class StressInstance:
    """One randomized boundedness-stress run: a collection of nonempty
    polyhedra, an adversarial or random policy, and a schedule staying below
    a fixed lambda ceiling."""

    def __init__(self, index, collection, policy, schedule, x0):
        self.index = index
        self.collection = collection
        self.policy = policy
        self.schedule = schedule
        self.x0 = x0


def stress_instances(seed, n_runs, max_polyhedra=5, max_dim=6,
                     max_constraints=8, lambda_max=1.9):
    """Deterministic stream of stress instances: alternating farthest-set and
    random policies over random polyhedral families, with relaxation
    parameters drawn in [0, lambda_max] (every fourth run pinned at the
    ceiling)."""
    from . import schedules
    from .iteration import Collection, Farthest, RandomUniform

    rng = np.random.default_rng(seed)
    out = []
    for i in range(n_runs):
        dim = int(rng.integers(2, max_dim + 1))
        n_sets = int(rng.integers(2, max_polyhedra + 1))
        polys = tuple(
            random_polyhedron(rng, dim, int(rng.integers(3, max_constraints + 1)))
            for _ in range(n_sets))
        x0 = rng.normal(size=dim) * 4.0
        policy = Farthest() if i % 2 == 0 else RandomUniform(int(rng.integers(2 ** 31)))
        if i % 4 == 3:
            schedule = schedules.constant(lambda_max)
        else:
            schedule = schedules.random_uniform(lambda_max,
                                                seed=int(rng.integers(2 ** 31)))
        out.append(StressInstance(i, Collection(polys), policy, schedule, x0))
    return out
