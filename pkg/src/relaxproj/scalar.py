"""The scalar two-point recursion under relaxation schedules approaching 2.

Relaxed projections between two singletons ``{a}`` and ``{b}`` on the line,

    x_{2n+1} = (1 - lambda_{2n})   x_{2n}   + lambda_{2n}   a,
    x_{2n+2} = (1 - lambda_{2n+1}) x_{2n+1} + lambda_{2n+1} b,

reduce on the even subsequence ``y_n = x_{2n}`` to the affine recursion
``y_{n+1} = gamma_n y_n + d_n`` with

    gamma_n = (1 - lambda_{2n})(1 - lambda_{2n+1}),
    d_n     = (1 - lambda_{2n+1}) lambda_{2n} a + lambda_{2n+1} b,

whose closed-form solution is

    y_n = Gamma_{0,n-1} y_0 + sum_{k<n} d_k Gamma_{k+1,n-1},

where ``Gamma_{k,n}`` is the running product of gamma over [k, n] (empty
products are 1). Depending on how fast the defects ``eps_n = 2 - lambda_n``
vanish, the run converges, oscillates boundedly, diverges in norm, or
diverges while revisiting a bounded set; :func:`regime_classify` separates
the four behaviours on a finite run.
"""

import enum
import io
from dataclasses import dataclass

import numpy as np

from .schedules import LambdaSchedule, explicit

#: trend-test constants for regime classification
RECORD_GROWTH_REL = 0.01       # quarter-over-quarter running-max growth
STRONG_GROWTH_FACTOR = 100.0   # trailing-min over leading-max blowup
OSCILLATION_TOL = 1e-6         # trailing spread separating convergence


@dataclass(frozen=True)
class ScalarProblem:
    """Two target points on the line and a starting value.

    ``a == b`` is allowed: then the run is bounded for every schedule in
    [0, 2] (and constant when ``x0 = a = b``); the divergence regimes require
    distinct targets.
    """

    a: float
    b: float
    x0: float


def iterate_scalar(P, sched, n_steps):
    """Run the recursion; returns the array ``x_0 .. x_{n_steps}``."""
    xs = np.empty(n_steps + 1)
    x = float(P.x0)
    xs[0] = x
    for n in range(n_steps):
        lam = sched.value(n)
        target = P.a if n % 2 == 0 else P.b
        x = (1.0 - lam) * x + lam * target
        xs[n + 1] = x
    return xs


@dataclass(frozen=True)
class DerivedSequences:
    """Per-pair coefficient sequences of the even-subsequence recursion."""

    lam: np.ndarray    # lambda_0 .. lambda_{2n-1}
    eps: np.ndarray    # 2 - lambda_m, per step
    gamma: np.ndarray  # per pair
    delta: np.ndarray  # 1 - gamma, per pair
    drive: np.ndarray  # d_n, per pair


def derived_sequences(P, sched, n_pairs):
    """Evaluate lambda, eps, gamma, delta and the drive d for *n_pairs* pairs."""
    lam = sched.values(2 * n_pairs)
    eps = 2.0 - lam
    even = lam[0::2]
    odd = lam[1::2]
    gamma = (1.0 - even) * (1.0 - odd)
    delta = 1.0 - gamma
    drive = (1.0 - odd) * even * P.a + odd * P.b
    return DerivedSequences(lam, eps, gamma, delta, drive)


def gamma_product(gamma, k, n):
    """Running product ``gamma_k * ... * gamma_n``; 1 when ``k > n``."""
    if k > n:
        return 1.0
    out = 1.0
    for j in range(k, n + 1):
        out *= gamma[j]
    return out


def gamma_product_table(gamma):
    """All products ``G[k, n] = gamma_k ... gamma_n`` for ``k, n < len(gamma)``,
    with ones where ``k > n``. Row k is a cumulative product of ``gamma[k:]``."""
    N = len(gamma)
    G = np.ones((N, N))
    for k in range(N):
        G[k, k:] = np.cumprod(gamma[k:])
    return G


def closed_form_even(P, sched, n):
    """Evaluate ``x_{2n}`` from the closed-form solution of the pair recursion.

    Uses suffix products of gamma, so schedules with ``gamma = 0`` (for
    instance a pure projection on the odd step) are handled exactly.
    """
    if n == 0:
        return float(P.x0)
    seqs = derived_sequences(P, sched, n)
    # suffix[j] = gamma_j * ... * gamma_{n-1}, suffix[n] = 1
    suffix = np.ones(n + 1)
    suffix[:n] = np.cumprod(seqs.gamma[::-1])[::-1]
    return float(suffix[0] * P.x0 + np.dot(seqs.drive, suffix[1:]))


@dataclass(frozen=True)
class SummabilityReport:
    """Partial sums of the defect/contraction comparison chain."""

    n_pairs: int
    sum_eps: float
    sum_delta: float
    sum_eps_minus_half_squares: float
    half_sum_eps: float
    termwise_violations: tuple

    @property
    def chain_holds(self):
        return not self.termwise_violations and (
            self.sum_eps >= self.sum_delta
            >= self.sum_eps_minus_half_squares >= self.half_sum_eps)


def summability_relation(eps):
    """Check, pair by pair, the comparison chain between the step defects
    ``eps`` and the pair contractions ``delta``:

        eps + eps' >= delta >= eps + eps' - (eps^2 + eps'^2)/2 >= (eps + eps')/2

    for ``delta = eps + eps' - eps * eps'``. Requires every defect in [0, 1[
    and an even number of entries (they pair up). Returns the partial sums of
    the four expressions and any termwise violations (beyond roundoff).
    """
    eps = np.asarray(eps, dtype=float)
    if np.any(eps < 0.0) or np.any(eps >= 1.0):
        raise ValueError("every defect must lie in [0, 1[")
    if len(eps) % 2 != 0:
        raise ValueError("defects must come in pairs (even length)")
    e0 = eps[0::2]
    e1 = eps[1::2]
    pair_sum = e0 + e1
    delta = pair_sum - e0 * e1
    mid = pair_sum - 0.5 * (e0 ** 2 + e1 ** 2)
    half = 0.5 * pair_sum
    slack = 1e-12 * max(1.0, float(pair_sum.max(initial=0.0)))
    violations = tuple(
        int(i) for i in np.flatnonzero(
            (delta > pair_sum + slack) | (mid > delta + slack) | (half > mid + slack)))
    return SummabilityReport(
        n_pairs=len(delta),
        sum_eps=float(eps.sum()),
        sum_delta=float(delta.sum()),
        sum_eps_minus_half_squares=float(eps.sum() - 0.5 * (eps ** 2).sum()),
        half_sum_eps=float(0.5 * eps.sum()),
        termwise_violations=violations,
    )


class Regime(enum.Enum):
    CONVERGENT = "CONVERGENT"
    BOUNDED_OSCILLATING = "BOUNDED_OSCILLATING"
    UNBOUNDED_WITH_BOUNDED_SUBSEQ = "UNBOUNDED_WITH_BOUNDED_SUBSEQ"
    DIVERGENT_TO_INFINITY = "DIVERGENT_TO_INFINITY"


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    growing: bool
    lead_max: float
    trail_min: float
    trail_max: float
    trail_spread: float
    even_limit_estimate: float
    odd_limit_estimate: float


def detect_growth(magnitudes):
    """Trend test for unbounded growth of a nonnegative sequence.

    Fires when the running maximum keeps advancing by at least
    ``RECORD_GROWTH_REL`` across the third and fourth quarters of the run
    (slow but persistent growth), or when the trailing-window minimum
    dwarfs the leading-window maximum by ``STRONG_GROWTH_FACTOR`` (fast
    growth). Bounded runs settle: their running maximum stops advancing.
    """
    m = np.asarray(magnitudes, dtype=float)
    n = len(m)
    w = max(1, n // 10)
    floor = 1e-9 * max(1.0, float(m.max(initial=0.0)))
    m_half = float(m[: n // 2].max(initial=0.0))
    m_3q = float(m[: (3 * n) // 4].max(initial=0.0))
    m_full = float(m.max(initial=0.0))
    records = (m_3q > m_half * (1.0 + RECORD_GROWTH_REL) + floor
               and m_full > m_3q * (1.0 + RECORD_GROWTH_REL) + floor)
    strong = float(m[n - w:].min()) > STRONG_GROWTH_FACTOR * float(m[:w].max()) + floor
    return records or strong


def regime_classify(P, sched, n_steps):
    """Classify a finite run into one of the four asymptotic regimes.

    Growth is detected by :func:`detect_growth` on ``|x_n|``; growing runs
    whose trailing window still visits the ball of radius ``|b| + 1`` are
    classified as unbounded with a bounded subsequence, otherwise as
    divergent in norm. Non-growing runs are convergent when the trailing
    window has spread at most ``OSCILLATION_TOL`` and boundedly oscillating
    otherwise. Reliable from a few thousand steps on.
    """
    xs = iterate_scalar(P, sched, n_steps)
    m = np.abs(xs)
    n = len(xs)
    w = max(2, n // 10)
    tail = xs[n - w:]
    lead_max = float(m[:w].max())
    trail_min = float(m[n - w:].min())
    trail_max = float(m[n - w:].max())
    spread = float(tail.max() - tail.min())
    offset = n - w
    evens = tail[(np.arange(offset, n) % 2) == 0]
    odds = tail[(np.arange(offset, n) % 2) == 1]
    even_est = float(evens.mean()) if evens.size else float("nan")
    odd_est = float(odds.mean()) if odds.size else float("nan")
    growing = detect_growth(m)
    if growing:
        revisits = trail_min <= abs(P.b) + 1.0
        regime = (Regime.UNBOUNDED_WITH_BOUNDED_SUBSEQ if revisits
                  else Regime.DIVERGENT_TO_INFINITY)
    elif spread <= OSCILLATION_TOL:
        regime = Regime.CONVERGENT
    else:
        regime = Regime.BOUNDED_OSCILLATING
    return RegimeReport(regime, growing, lead_max, trail_min, trail_max,
                        spread, even_est, odd_est)


@dataclass(frozen=True)
class HarmonicLimitReport:
    n: int
    y_half: float
    y_n: float
    y_n_closed_form: float
    sign_matches: bool
    magnitude_increases: bool
    relative_agreement: float


def harmonic_limit_check(P, n, sched=None):
    """Check the even-subsequence drift under the harmonic schedule
    ``lambda_k = (2k+3)/(k+2)``: the even terms drift towards
    ``sign(b - a) * infinity``, so ``y_n - y_{n/2}`` carries that sign and
    ``|y_n|`` grows. Recursion and closed form are compared as mutual
    oracles."""
    if P.a == P.b:
        raise ValueError("the drift check needs distinct targets")
    from . import schedules

    sched = sched or schedules.harmonic()
    xs = iterate_scalar(P, sched, 2 * n)
    y_n = float(xs[2 * n])
    y_half = float(xs[2 * (n // 2)])
    closed = closed_form_even(P, sched, n)
    rel = abs(closed - y_n) / max(1.0, abs(y_n))
    return HarmonicLimitReport(
        n=n,
        y_half=y_half,
        y_n=y_n,
        y_n_closed_form=closed,
        sign_matches=np.sign(y_n - y_half) == np.sign(P.b - P.a),
        magnitude_increases=abs(y_n) > abs(y_half),
        relative_agreement=rel,
    )


def build_truncated_schedule(mu, total_len):
    """Materialize the truncate-and-reset schedule from an explicit list of
    parameters: block m emits ``mu_0 .. mu_{2m}`` followed by a single 1, so
    the ones land at the indices ``n(n+1) - 1``, n >= 1.

    *mu* must be long enough to fill *total_len* entries.
    """
    mu = [float(v) for v in mu]
    out = []
    m = 0
    while len(out) < total_len:
        need = 2 * m + 1
        if need > len(mu):
            raise ValueError(
                f"need mu_0..mu_{need - 1} for block {m}, got {len(mu)} values")
        out.extend(mu[:need])
        out.append(1.0)
        m += 1
    return explicit(out[:total_len], name="truncated_reset_explicit")


def write_csv(P, sched, n_steps, fileobj):
    """Trajectory CSV: ``n, lambda_n, x_n`` on every row, and the even-row
    pair quantities ``y, gamma, delta, d, Gamma_0_n`` (blank on odd rows).
    ``Gamma_0_n`` is the running product of gamma through pair n. Floats use
    17 significant digits so re-runs are byte-identical. The schedule must be
    defined through index ``n_steps + 1`` (the final even row needs its pair
    partner)."""
    xs = iterate_scalar(P, sched, n_steps)
    n_pairs = n_steps // 2 + 1
    seqs = derived_sequences(P, sched, n_pairs)
    gamma_running = np.cumprod(seqs.gamma)
    fmt = lambda v: f"{v:.17g}"
    fileobj.write("n,lambda_n,x_n,y,gamma,delta,d,Gamma_0_n\n")
    for n in range(n_steps + 1):
        row = [str(n), fmt(sched.value(n)), fmt(xs[n])]
        if n % 2 == 0:
            k = n // 2
            row += [fmt(xs[n]), fmt(seqs.gamma[k]), fmt(seqs.delta[k]),
                    fmt(seqs.drive[k]), fmt(gamma_running[k])]
        else:
            row += ["", "", "", "", ""]
        fileobj.write(",".join(row) + "\n")


def csv_text(P, sched, n_steps):
    buf = io.StringIO()
    write_csv(P, sched, n_steps, buf)
    return buf.getvalue()
