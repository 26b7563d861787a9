"""The orbit engine: ``x_{n+1} = (1 - lambda_n) x_n + lambda_n P_{S_n} x_n``
for arbitrary set-selection policies and relaxation schedules, with
boundedness and divergence diagnostics.

Randomized policies and schedules are reproducible: the same collection,
policy seed, schedule seed and starting point give bit-identical
trajectories (generator: numpy PCG64, recorded in the diagnostics).
"""

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyPolyhedronError
from .feasibility import feasible_point
from .geometry import AffineSubspace, Polyhedron, as_vector
from .projectors import EpiExp, project
from .tolerances import tol

RNG_ALGORITHM = "numpy.random.Generator(PCG64)"

#: boundedness verdict constants
SIGMA_GROW = 1e-3        # log-norm slope flagging fast growth
GROWTH_FACTOR = 10.0     # trailing-window over first-window blowup
RECORD_GROWTH_REL = 0.01 # quarter-over-quarter running-max growth


@dataclass(frozen=True, eq=False)
class Collection:
    """A finite family of projectable sets sharing one ambient dimension.

    Accepted set types: AffineSubspace, Polyhedron, EpiExp. Polyhedra are
    checked for nonemptiness at construction.
    """

    sets: tuple
    ambient_dim: int

    def __init__(self, sets, ambient_dim=None):
        sets = tuple(sets)
        if not sets:
            raise ValueError("a collection needs at least one set")
        dims = []
        for s in sets:
            if isinstance(s, (AffineSubspace, Polyhedron, EpiExp)):
                dims.append(s.ambient_dim)
            else:
                raise TypeError(f"unsupported set type {type(s).__name__}")
        if ambient_dim is None:
            ambient_dim = dims[0]
        if any(d != ambient_dim for d in dims):
            raise ValueError(f"sets must all live in dimension {ambient_dim}")
        for s in sets:
            if isinstance(s, Polyhedron) and s.n_constraints:
                if feasible_point(s.A, s.b, dim=s.ambient_dim) is None:
                    raise EmptyPolyhedronError(f"collection member {s!r} is empty")
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "ambient_dim", int(ambient_dim))

    def __len__(self):
        return len(self.sets)


class Cyclic:
    """Visit the sets in order, one per step."""

    name = "cyclic"
    needs_all_projections = False

    def pick(self, n, x, collection, projections=None):
        return n % len(collection)


class RandomUniform:
    """Pick a set uniformly at random, reproducibly from the seed. Draws are
    cached in step order, so reuse of the policy object replays the stream."""

    needs_all_projections = False

    def __init__(self, seed):
        self.seed = int(seed)
        self.name = f"random_uniform#{self.seed}"
        self._rng = np.random.default_rng(self.seed)
        self._cache = []

    def pick(self, n, x, collection, projections=None):
        while len(self._cache) <= n:
            self._cache.append(int(self._rng.integers(0, len(collection))))
        return self._cache[n]


class Farthest:
    """Greedy adversary: pick the set whose projection is farthest from the
    current point (first index on ties). Stresses boundedness claims."""

    name = "farthest"
    needs_all_projections = True

    def pick(self, n, x, collection, projections):
        dists = [float(np.linalg.norm(x - p)) for p in projections]
        return int(np.argmax(dists))


class Scripted:
    """Replay an explicit index list."""

    needs_all_projections = False

    def __init__(self, indices):
        self.indices = [int(i) for i in indices]
        self.name = f"scripted({len(self.indices)})"

    def pick(self, n, x, collection, projections=None):
        idx = self.indices[n]
        if not 0 <= idx < len(collection):
            raise ValueError(f"scripted index {idx} out of range at step {n}")
        return idx


@dataclass(frozen=True, eq=False)
class Trajectory:
    """A recorded orbit.

    ``iterates`` has shape (n_steps + 1, d); ``picks[n]`` is the
    ``(set_index, lambda)`` pair that produced ``iterates[n + 1]``.
    """

    iterates: np.ndarray
    norms: np.ndarray
    picks: tuple
    diagnostics: dict = field(default_factory=dict)

    @property
    def n_steps(self):
        return len(self.picks)

    def write_csv(self, fileobj):
        """Columns ``n, x_1..x_d, norm, set_index, lambda``; the pick columns
        describe the step that *produced* row n (row 0 carries -1, 0). Floats
        use 17 significant digits, so equal runs give byte-identical files."""
        d = self.iterates.shape[1]
        fmt = lambda v: f"{v:.17g}"
        header = ["n"] + [f"x_{j + 1}" for j in range(d)] + ["norm", "set_index", "lambda"]
        fileobj.write(",".join(header) + "\n")
        for n in range(len(self.iterates)):
            idx, lam = (-1, 0.0) if n == 0 else self.picks[n - 1]
            row = ([str(n)] + [fmt(v) for v in self.iterates[n]]
                   + [fmt(self.norms[n]), str(idx), fmt(lam)])
            fileobj.write(",".join(row) + "\n")

    def csv_text(self):
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def run(collection, policy, schedule, x0, n_steps):
    """Generate the orbit of the relaxed-projection iteration.

    Parameters
    ----------
    collection : Collection
    policy : object with ``pick(n, x, collection, projections)``
    schedule : LambdaSchedule
    x0 : vector
    n_steps : int

    Returns
    -------
    Trajectory
    """
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    x = as_vector(x0, collection.ambient_dim)
    iterates = np.empty((n_steps + 1, collection.ambient_dim))
    iterates[0] = x
    norms = np.empty(n_steps + 1)
    norms[0] = np.linalg.norm(x)
    picks = []
    for n in range(n_steps):
        lam = schedule.value(n)
        if policy.needs_all_projections:
            projections = [project(s, x) for s in collection.sets]
            idx = policy.pick(n, x, collection, projections)
            p = projections[idx]
        else:
            idx = policy.pick(n, x, collection)
            p = project(collection.sets[idx], x)
        x = (1.0 - lam) * x + lam * p
        iterates[n + 1] = x
        norms[n + 1] = np.linalg.norm(x)
        picks.append((idx, lam))
    running_max = float(norms.max())
    diagnostics = {
        "rng": RNG_ALGORITHM,
        "policy": policy.name,
        "schedule": schedule.name,
        "running_max_norm": running_max,
        "norms_nonincreasing": bool(np.all(np.diff(norms) <= tol.feas)),
        "norms_nondecreasing": bool(np.all(np.diff(norms) >= -tol.feas)),
    }
    return Trajectory(iterates, norms, tuple(picks), diagnostics)


@dataclass(frozen=True)
class BoundednessReport:
    verdict: str                 # "STABLE" | "GROWING"
    sup_norm: float
    sup_trailing_window: float
    first_window_max: float
    trailing_log_slope: float
    strong_growth: bool          # factor blowup with positive log-slope
    record_growth: bool          # running max still advancing late in the run

    @property
    def stable(self):
        return self.verdict == "STABLE"


def boundedness_report(trajectory, window):
    """Boundedness verdict for a recorded orbit.

    Two growth detectors, either of which yields GROWING: the trailing-window
    maximum exceeding the first-window maximum by ``GROWTH_FACTOR`` together
    with a trailing log-norm slope above ``SIGMA_GROW`` (fast growth), or the
    running maximum still advancing by ``RECORD_GROWTH_REL`` across the third
    and fourth quarters of the run (slow but persistent growth, e.g. the
    logarithmic-rate divergence of the line/epi-exp orbit). Bounded orbits
    settle and report STABLE.
    """
    if window < 1:
        raise ValueError("window must be at least 1")
    norms = trajectory.norms
    n = len(norms)
    w = min(window, n)
    sup_norm = float(norms.max())
    sup_trail = float(norms[n - w:].max())
    first_max = float(norms[:w].max())
    half = norms[n // 2:]
    steps = np.arange(n // 2, n)
    logs = np.log(np.maximum(half, 1e-300))
    slope = float(np.polyfit(steps, logs, 1)[0]) if len(half) > 1 else 0.0
    floor = 1e-9 * max(1.0, sup_norm)
    strong = sup_trail >= GROWTH_FACTOR * first_max + floor and slope > SIGMA_GROW
    m_half = float(norms[: n // 2].max(initial=0.0))
    m_3q = float(norms[: (3 * n) // 4].max(initial=0.0))
    record = (m_3q > m_half * (1.0 + RECORD_GROWTH_REL) + floor
              and sup_norm > m_3q * (1.0 + RECORD_GROWTH_REL) + floor)
    verdict = "GROWING" if (strong or record) else "STABLE"
    return BoundednessReport(verdict, sup_norm, sup_trail, first_max, slope,
                             strong, record)


@dataclass(frozen=True)
class FejerReport:
    status: str            # "monotone" | "violated" | "not_applicable"
    common_point: object   # ndarray or None
    max_violation: float
    n_violations: int

    @property
    def monotone(self):
        return self.status == "monotone"


def _find_common_point(collection):
    """A point in the intersection of all sets, via one feasibility sweep.
    Returns None if the sweep proves nothing (empty intersection, or a
    non-polyhedral member blocks the sweep)."""
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for s in collection.sets:
        if isinstance(s, Polyhedron):
            if s.n_constraints:
                A_ub.append(s.A)
                b_ub.append(s.b)
        elif isinstance(s, AffineSubspace):
            for u, rhs in s.equality_rows():
                A_eq.append(u)
                b_eq.append(rhs)
        else:
            return None  # no linear description to sweep
    A = np.vstack(A_ub) if A_ub else None
    b = np.concatenate(b_ub) if b_ub else None
    return feasible_point(A, b, A_eq if A_eq else None,
                          b_eq if b_eq else None, dim=collection.ambient_dim)


def fejer_check(trajectory, collection, z=None):
    """Verify the monotone-distance property of the orbit with respect to a
    common point of all sets.

    When no *z* is supplied, a feasibility sweep over the linear members
    looks for one; if none is found (or a member has no linear description),
    the report is marked not applicable. Distances to *z* must then be
    nonincreasing up to ``tol.feas``.
    """
    if z is None:
        z = _find_common_point(collection)
        if z is None:
            return FejerReport("not_applicable", None, 0.0, 0)
    z = as_vector(z, collection.ambient_dim)
    for s in collection.sets:
        if not s.contains(z):
            raise ValueError("the supplied point is not in every set")
    dists = np.linalg.norm(trajectory.iterates - z[None, :], axis=1)
    increases = np.diff(dists)
    bad = increases > tol.feas
    max_violation = float(increases[bad].max()) if np.any(bad) else 0.0
    status = "violated" if np.any(bad) else "monotone"
    return FejerReport(status, z, max_violation, int(np.count_nonzero(bad)))


def line_epiexp_collection():
    """The horizontal axis of the plane and the epigraph of exp: two closed
    convex sets with empty intersection and gap zero (not attained)."""
    axis = AffineSubspace(np.zeros(2), np.array([[1.0, 0.0]]))
    return Collection((axis, EpiExp()), 2)


def divergence_experiment_line_epiexp(x0, n_steps, lam=1.0):
    """Alternate projections onto the horizontal axis (first) and the
    epigraph of exp. Every orbit drifts left along the axis with norms
    growing without bound (at a logarithmic rate), the classical witness
    that polyhedrality cannot be dropped from the boundedness results."""
    from .schedules import constant

    return run(line_epiexp_collection(), Cyclic(), constant(lam),
               as_vector(x0, 2), n_steps)
