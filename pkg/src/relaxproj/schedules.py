"""Relaxation-parameter schedules.

A schedule maps the step index n to a relaxation parameter in [0, 2]. The
interesting regimes arise when the parameters approach 2 (near-reflections):
how fast the defect ``2 - lambda_n`` vanishes decides between boundedness
and divergence, see :mod:`relaxproj.scalar`.

Randomized schedules draw lazily into an index-ordered cache, so values are
reproducible from the seed no matter how they are accessed.
"""

import math

import numpy as np


class LambdaSchedule:
    """A relaxation schedule ``n -> lambda_n`` with values in [0, 2]."""

    def __init__(self, fn, name, length=None):
        self._fn = fn
        self.name = name
        self.length = length  # None = unbounded

    def value(self, n):
        if n < 0 or (self.length is not None and n >= self.length):
            raise IndexError(f"schedule {self.name!r} has no value at index {n}")
        lam = float(self._fn(n))
        if not 0.0 <= lam <= 2.0:
            raise ValueError(f"schedule {self.name!r} produced {lam} outside [0, 2]")
        return lam

    def values(self, count):
        return np.array([self.value(n) for n in range(count)])

    def __repr__(self):
        return f"LambdaSchedule({self.name!r})"


def constant(lam):
    lam = float(lam)
    return LambdaSchedule(lambda n: lam, f"constant({lam:g})")


def explicit(values, name="explicit"):
    values = [float(v) for v in values]
    return LambdaSchedule(lambda n: values[n], name, length=len(values))


def harmonic():
    """``lambda_n = (2n + 3) / (n + 2)``: parameters in ]1, 2[ rising to 2 with
    a non-summable defect, but with telescoping pair products."""
    return LambdaSchedule(lambda n: (2.0 * n + 3.0) / (n + 2.0), "harmonic")


def two_minus(eps_fn, name):
    """``lambda_n = 2 - eps_n`` for a caller-supplied defect sequence."""
    return LambdaSchedule(lambda n: 2.0 - float(eps_fn(n)), name)


def two_minus_geometric():
    """``lambda_n = 2 - 2^-(n+1)``: summable defect, the fastest approach to
    pure reflections considered here."""
    return two_minus(lambda n: 2.0 ** -(n + 1), "two_minus_geometric")


def reflect_project(rho_fn=None, name="reflect_project"):
    """Near-reflection on even steps, pure projection on odd steps:
    ``lambda_{2n} = 2 - rho_n`` and ``lambda_{2n+1} = 1``.

    Default ``rho_n = 1/(n+2)``. The odd-step projections anchor the even
    subsequence, keeping the whole run bounded however slowly rho vanishes.
    """
    if rho_fn is None:
        rho_fn = lambda n: 1.0 / (n + 2.0)

    def fn(n):
        if n % 2 == 1:
            return 1.0
        return 2.0 - float(rho_fn(n // 2))

    return LambdaSchedule(fn, name)


def _block_index(n):
    # largest m with m(m+1) <= n
    m = (math.isqrt(4 * n + 1) - 1) // 2
    while (m + 1) * (m + 2) <= n:
        m += 1
    while m * (m + 1) > n:
        m -= 1
    return m


def truncated_reset(mu_fn=None, name="truncated_reset"):
    """Growing truncations of a schedule, each closed by a single 1.

    Block m (m = 0, 1, ...) consists of ``mu_0, ..., mu_{2m}`` followed by
    one ``1``, so the ones sit exactly at the indices ``n(n+1) - 1`` for
    n >= 1 and the stretches between resets grow without bound. Default
    ``mu_n = 2 - 2^-(n+1)``.
    """
    if mu_fn is None:
        mu_fn = lambda n: 2.0 - 2.0 ** -(n + 1)

    def fn(n):
        m = _block_index(n)
        offset = n - m * (m + 1)
        if offset == 2 * m + 1:
            return 1.0
        return float(mu_fn(offset))

    return LambdaSchedule(fn, name)


class _LazyRandom:
    """Index-ordered lazy cache over a seeded generator."""

    def __init__(self, seed, draw):
        self._rng = np.random.default_rng(seed)
        self._draw = draw
        self._cache = []

    def __call__(self, n):
        while len(self._cache) <= n:
            self._cache.append(self._draw(self._rng))
        return self._cache[n]


def random_uniform(high, seed, low=0.0):
    """I.i.d. parameters uniform on [low, high], reproducible from the seed."""
    if not 0.0 <= low <= high <= 2.0:
        raise ValueError("random schedule range must sit inside [0, 2]")
    fn = _LazyRandom(seed, lambda rng: rng.uniform(low, high))
    return LambdaSchedule(fn, f"random_uniform[{low:g},{high:g}]#{seed}")


_RHO_GENERATORS = {
    "inverse_linear": lambda n: 1.0 / (n + 2.0),
    "geometric": lambda n: 2.0 ** -(n + 1),
}


def from_config(spec):
    """Build a schedule from a JSON-style mapping: ``{"kind": ..., ...}``.

    Kinds: constant, explicit, harmonic, two_minus_geometric,
    reflect_project, truncated_reset, random_uniform.
    """
    if isinstance(spec, (int, float)):
        return constant(spec)
    kind = spec.get("kind")
    if kind == "constant":
        return constant(spec["value"])
    if kind == "explicit":
        return explicit(spec["values"])
    if kind == "harmonic":
        return harmonic()
    if kind == "two_minus_geometric":
        return two_minus_geometric()
    if kind == "reflect_project":
        rho = spec.get("rho", "inverse_linear")
        if rho not in _RHO_GENERATORS:
            raise ValueError(f"unknown rho generator {rho!r}")
        return reflect_project(_RHO_GENERATORS[rho], f"reflect_project({rho})")
    if kind == "truncated_reset":
        mu = spec.get("mu", "two_minus_geometric")
        if mu == "two_minus_geometric":
            return truncated_reset()
        raise ValueError(f"unknown mu generator {mu!r}")
    if kind == "random_uniform":
        return random_uniform(spec.get("high", 2.0), spec["seed"], spec.get("low", 0.0))
    raise ValueError(f"unknown schedule kind {kind!r}")
