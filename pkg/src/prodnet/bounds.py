"""Closed-form and numerically solved resilience bounds per architecture.

Asymptotic results are surfaced as the explicit pre-asymptotic expressions
their proofs actually establish, each labeled with the regime it covers.
Transcendental work happens in log space wherever quantities like
(p*w)**D or m**D threaten overflow.  Bound values are clamped into [0, 1]
and clamping is flagged (BoundResult fields, or a ClampWarning for the
operations that return a bare float).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ParameterError, UnsupportedRegimeError
from .generators import BranchingDistribution

BISECTION_TOL = 1e-10
POPULATION_CAP = 10**9  # runs above this are treated as never going extinct


class ClampWarning(UserWarning):
    """A bound value fell outside [0, 1] and was clamped."""


@dataclass
class BoundResult:
    """A lower/upper resilience bound pair with its regime label."""

    lower: Optional[float]
    upper: Optional[float]
    regime: str
    inputs: dict = field(default_factory=dict)
    lower_clamped: bool = False
    upper_clamped: bool = False


def _clamp01(v: float) -> tuple[float, bool]:
    if v < 0.0:
        return 0.0, True
    if v > 1.0:
        return 1.0, True
    return v, False


def _check_eps(epsilon, closed_top=False):
    hi_ok = epsilon <= 1.0 if closed_top else epsilon < 1.0
    if not (0.0 < epsilon and hi_ok):
        top = "(0, 1]" if closed_top else "(0, 1)"
        raise ParameterError(f"epsilon must lie in {top}, got {epsilon!r}")


def _check_prob(v, name):
    if not (0.0 <= v <= 1.0):
        raise ParameterError(f"{name} must lie in [0, 1], got {v!r}")


def _check_n(n):
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    return int(n)


def _check_pos_int(v, name):
    if not isinstance(v, (int, np.integer)) or v < 1:
        raise ParameterError(f"{name} must be a positive integer, got {v!r}")
    return int(v)


# ---------------------------------------------------------------------------
# Random DAG: cascade-size power law and tail function
# ---------------------------------------------------------------------------


def powerlaw_pmf(f: int, K: int, p: float, x: float, n: int = 1) -> float:
    """Asymptotic cascade-size pmf x^n / (K (1 - (1-x^n)(1-p)^f)).

    Describes the single-seed cascade model on a random DAG: a uniformly
    chosen product fails spontaneously with probability x^n and drags down
    everything it reaches.  Limits p -> 0 (value 1/K), p -> 1 (x^n / K),
    and x -> 1 (1/K) all fall out of the formula; x = 0 gives 0.
    """
    K = _check_pos_int(K, "K")
    f = _check_pos_int(f, "f")
    if f > K:
        raise ParameterError(f"f must lie in 1..K, got f={f}, K={K}")
    _check_prob(p, "p")
    _check_prob(x, "x")
    n = _check_n(n)
    if x == 0.0:
        return 0.0
    xn = x**n
    denom = K * (1.0 - (1.0 - xn) * (1.0 - p) ** f)
    return xn / denom


def powerlaw_tail_constant(K: int, p: float, x: float, n: int = 1) -> float:
    """The constant C(K, p, x, n) in the tail lower bound Pr[F >= f] >= C/f."""
    K = _check_pos_int(K, "K")
    _check_prob(p, "p")
    _check_prob(x, "x")
    n = _check_n(n)
    if x == 0.0:
        return 0.0
    xn = x**n
    if p == 1.0:
        return xn / K if xn == 1.0 else 0.0
    return xn / (K * (1.0 + (1.0 - xn) * (-math.log1p(-p))))


def cascade_tail_g(x: float, K: int, p: float, epsilon: float, n: int = 1) -> float:
    """Fractional-cascade probability Pr[F >= eps*K] for the random DAG.

    Evaluates the displayed closed form exactly; requires p in (0, 1) so
    log(1/(1-p)) is finite and positive.
    """
    K = _check_pos_int(K, "K")
    if not (0.0 < p < 1.0):
        raise ParameterError(f"p must lie strictly inside (0, 1), got {p!r}")
    _check_prob(x, "x")
    _check_eps(epsilon, closed_top=True)
    n = _check_n(n)
    if x == 0.0:
        return 0.0
    xn = x**n
    log_one_minus_p = math.log1p(-p)
    big_l = -log_one_minus_p
    a = 1.0 - (1.0 - xn) * math.exp(K * log_one_minus_p)
    b = 1.0 - (1.0 - xn) * math.exp(epsilon * K * log_one_minus_p)
    return xn * (1.0 - epsilon + math.log(a / b) / (K * big_l))


def cascade_tail_g_envelope(x: float, K: int, p: float, epsilon: float, n: int = 1) -> float:
    """Analytic majorant of the tail function: x^n (1-eps) + 1/(K log(1/(1-p)))."""
    K = _check_pos_int(K, "K")
    if not (0.0 < p < 1.0):
        raise ParameterError(f"p must lie strictly inside (0, 1), got {p!r}")
    _check_prob(x, "x")
    _check_eps(epsilon, closed_top=True)
    n = _check_n(n)
    return x**n * (1.0 - epsilon) + 1.0 / (K * -math.log1p(-p))


def rdag_lb_x(K: int, p: float, epsilon: float, n: int = 1) -> float:
    """Largest closed-form x keeping the tail majorant at O(1/K).

    Returns (1 / (K log(1/(1-p)) (1-eps)))^(1/n) clamped to [0, 1]; at this
    x the majorant equals 2 / (K log(1/(1-p))).
    """
    K = _check_pos_int(K, "K")
    if not (0.0 < p < 1.0):
        raise ParameterError(f"p must lie strictly inside (0, 1), got {p!r}")
    _check_eps(epsilon)
    n = _check_n(n)
    big_l = -math.log1p(-p)
    value, clamped = _clamp01((1.0 / (K * big_l * (1.0 - epsilon))) ** (1.0 / n))
    if clamped:
        warnings.warn("rdag_lb_x clamped to [0, 1]", ClampWarning, stacklevel=2)
    return value


# ---------------------------------------------------------------------------
# Parallel products
# ---------------------------------------------------------------------------


def parallel_bounds(
    K: int, m: int, d: int, epsilon: float, n: int = 1, scope: str = "complex-only"
) -> BoundResult:
    """Resilience bounds for K parallel products with m inputs, dependency d.

    scope selects the product set the bound speaks about: the complex
    products alone or raw materials included.
    """
    K = _check_pos_int(K, "K")
    if K < 3:
        raise ParameterError(f"K must be at least 3 for the log terms, got {K}")
    m = _check_pos_int(m, "m")
    d = _check_pos_int(d, "d")
    _check_eps(epsilon)
    n = _check_n(n)
    if scope == "complex-only":
        lower_raw = (epsilon / (d * m) + math.sqrt(math.log(K) / (2.0 * m * K))) ** (1.0 / n)
        upper_raw = (1.0 - ((1.0 - epsilon) / 2.0) ** (1.0 / m)) ** (1.0 / n)
    elif scope == "all-products":
        lower_raw = (
            epsilon / (2.0 * (d + 1) * m) + math.sqrt(math.log(K / 2.0) / (2.0 * m * K))
        ) ** (1.0 / n)
        upper_raw = (1.0 - (1.0 - epsilon) / (2.0 * (m + 1))) ** (1.0 / n)
    else:
        raise ParameterError(f"scope must be 'complex-only' or 'all-products', got {scope!r}")
    lower, lc = _clamp01(lower_raw)
    upper, uc = _clamp01(upper_raw)
    return BoundResult(
        lower,
        upper,
        regime=scope,
        inputs={"K": K, "m": m, "d": d, "epsilon": epsilon, "n": n},
        lower_clamped=lc,
        upper_clamped=uc,
    )


# ---------------------------------------------------------------------------
# Backward (m-ary) supply tree
# ---------------------------------------------------------------------------


def tree_node_count(m: int, D: int) -> int:
    """Products in the complete m-ary supply tree: sum of m^(d-1) over tiers."""
    m = _check_pos_int(m, "m")
    D = _check_pos_int(D, "D")
    return D if m == 1 else (m**D - 1) // (m - 1)


def tree_bounds(m: int, D: int, epsilon: float, n: int = 1) -> BoundResult:
    """Resilience bounds for the backward m-ary tree of depth D."""
    _check_eps(epsilon)
    n = _check_n(n)
    K = tree_node_count(m, D)
    lower_raw = (-math.expm1(math.log1p(-1.0 / K) / ((1.0 - epsilon) * K))) ** (1.0 / n)
    if m == 1:
        regime = "chain"
        upper_raw = (2.0 / (K * (1.0 - epsilon))) ** (1.0 / n)
    else:
        regime = "fanout>=2"
        upper_raw = (
            ((1.0 - epsilon) * math.log(m) / math.log(K)) ** (1.0 / n) if K > 1 else math.inf
        )
    lower, lc = _clamp01(lower_raw)
    upper, uc = _clamp01(upper_raw)
    return BoundResult(
        lower,
        upper,
        regime=regime,
        inputs={"m": m, "D": D, "K": K, "epsilon": epsilon, "n": n},
        lower_clamped=lc,
        upper_clamped=uc,
    )


def tree_tier_survival(m: int, D: int, x: float, n: int = 1) -> np.ndarray:
    """Per-tier production probabilities q_1..q_D at failure level x.

    Tier D holds the raw materials; q satisfies q_d = q_{d+1}^m (1 - x^n)
    with q_{D+1} = 1, whose closed form is evaluated here.
    """
    m = _check_pos_int(m, "m")
    D = _check_pos_int(D, "D")
    _check_prob(x, "x")
    n = _check_n(n)
    log_z = math.log1p(-(x**n)) if x < 1.0 else -math.inf
    q = np.empty(D, dtype=np.float64)
    for d in range(1, D + 1):
        if m == 1:
            expo = D - d + 1
        else:
            expo = (m ** (D - d + 1) - 1) // (m - 1)
        q[d - 1] = math.exp(expo * log_z) if log_z > -math.inf else 0.0
    return q


def tree_catastrophe_prob(m: int, D: int, x: float, n: int = 1) -> tuple[float, float]:
    """Probability that at least one raw material malfunctions.

    Returns (exact, envelope): 1 - (1-x^n)^(m^(D-1)) and its lower envelope
    1 - exp(-x^n m^(D-1)).
    """
    m = _check_pos_int(m, "m")
    D = _check_pos_int(D, "D")
    _check_prob(x, "x")
    n = _check_n(n)
    leaves = m ** (D - 1)
    xn = x**n
    if x >= 1.0:
        return 1.0, -math.expm1(-float(leaves))
    exact = -math.expm1(leaves * math.log1p(-xn))
    envelope = -math.expm1(-xn * leaves)
    return exact, envelope


def tree_expected_survivors_envelope(m: int, D: int, x: float, n: int = 1) -> tuple[float, float]:
    """Proof envelopes (lower, upper) for the expected survivor count, m >= 2.

    These are the analytic devices K (1 - x^n (D-1)) and K x^n (D-1) / 2
    used to derive the resilience bounds; the upper one is an asymptotic
    instrument valid in the large-shock regime, not a uniform bound on
    E[S] (it dips below the truth for small x).
    """
    m = _check_pos_int(m, "m")
    if m < 2:
        raise ParameterError(
            "envelope is stated for m >= 2; for m = 1 sum tree_tier_survival instead"
        )
    D = _check_pos_int(D, "D")
    _check_prob(x, "x")
    n = _check_n(n)
    K = tree_node_count(m, D)
    xn = x**n
    return K * (1.0 - xn * (D - 1)), K * xn * (D - 1) / 2.0


# ---------------------------------------------------------------------------
# Forward (branching-process) network
# ---------------------------------------------------------------------------


def gw_extinction(dist: BranchingDistribution) -> float:
    """Extinction probability: smallest fixed point of the pgf on [0, 1].

    Returns 1 exactly when the mean is <= 1; otherwise bisects
    eta - pgf(eta) to 1e-10 (0 exactly when zero offspring is impossible).
    """
    if dist.mean <= 1.0:
        return 1.0
    if dist.prob_zero() == 0.0:
        return 0.0
    h = lambda eta: eta - float(dist.pgf(eta))
    hi = 1.0 - 1e-9
    while h(hi) <= 0.0:
        hi = 1.0 - (1.0 - hi) / 10.0
        if 1.0 - hi < 1e-15:
            return 1.0
    lo = 0.0
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if h(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _log_expm1_abs(u: float) -> float:
    # log|exp(u) - 1|, stable across magnitudes
    if u > 0.01:
        return u + math.log1p(-math.exp(-u))
    if u > 0.0:
        return math.log(math.expm1(u))
    return math.log(-math.expm1(u))


def _log_geom_sum(r: float, tau: int) -> float:
    """log(sum_{i=0}^{tau-1} r^i) for r >= 0."""
    if tau == 1 or r == 0.0:
        return 0.0
    lr = math.log(r)
    if abs(lr) < 1e-14:
        return math.log(tau)
    return _log_expm1_abs(tau * lr) - _log_expm1_abs(lr)


def _gw_survivor_leq(mu: float, tau: int, z: float, alpha: float) -> bool:
    # expected-survivor condition: z * gsum(mu z) <= alpha * gsum(mu)
    if z <= 0.0:
        return True
    lhs = math.log(z) + _log_geom_sum(mu * z, tau)
    rhs = math.log(alpha) + _log_geom_sum(mu, tau)
    return lhs <= rhs


def _gw_failure_leq(mu: float, tau: int, z: float, epsilon: float) -> bool:
    # expected-failure condition: gsum(mu) - z * gsum(mu z) <= epsilon
    log_n = _log_geom_sum(mu, tau)
    if z <= 0.0:
        return log_n <= math.log(epsilon)
    diff = math.log(z) + _log_geom_sum(mu * z, tau) - log_n
    if diff >= 0.0:
        return True
    return log_n + math.log(-math.expm1(diff)) <= math.log(epsilon)


def _gw_x_interval_top(mu: float, n: int) -> float:
    return 1.0 if mu < 1.0 else (1.0 - 1.0 / mu) ** (1.0 / n)


def _gw_check_regime(mu: float, side: str, epsilon: float):
    if mu <= 0.0:
        raise ParameterError(f"mu must be positive, got {mu!r}")
    gap_top = math.e**2 if side == "upper" else math.e
    if 1.0 <= mu <= gap_top:
        raise UnsupportedRegimeError(
            f"mu={mu:g} lies in the uncovered gap [1, e{'^2' if side == 'upper' else ''}]"
            f" where the root-existence lemma gives no guarantee"
        )
    if mu > 1.0:
        if side == "upper" and (1.0 - epsilon) / 2.0 <= 1.0 / math.log(mu):
            raise UnsupportedRegimeError(
                f"root existence for the upper bound needs (1-epsilon)/2 > 1/log(mu); "
                f"epsilon={epsilon:g} is too large for mu={mu:g}"
            )
        if side == "lower" and epsilon >= (math.log(mu) - 1.0) / mu:
            raise UnsupportedRegimeError(
                f"root existence for the lower bound needs epsilon < (log(mu)-1)/mu; "
                f"epsilon={epsilon:g} is too large for mu={mu:g}"
            )


def gw_bound_upper(mu: float, tau: int, epsilon: float, n: int = 1) -> float:
    """Smallest x making expected survivors <= (1-eps)/2 of expected size.

    Solved by bisection (tolerance 1e-10) on the interval [0, 1] for mu < 1
    and [0, (1 - 1/mu)^(1/n)] for mu > e^2; other regimes are refused.
    """
    tau = _check_pos_int(tau, "tau")
    _check_eps(epsilon)
    n = _check_n(n)
    _gw_check_regime(mu, "upper", epsilon)
    alpha = (1.0 - epsilon) / 2.0
    sat = lambda x: _gw_survivor_leq(mu, tau, 1.0 - x**n, alpha)
    hi = _gw_x_interval_top(mu, n)
    if sat(0.0):
        return 0.0
    if not sat(hi):
        raise UnsupportedRegimeError(
            f"no x in [0, {hi:g}] satisfies the survivor condition for "
            f"mu={mu:g}, tau={tau}, epsilon={epsilon:g}"
        )
    lo = 0.0
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if sat(mid):
            hi = mid
        else:
            lo = mid
    return hi


def gw_bound_lower(mu: float, tau: int, epsilon: float, n: int = 1) -> float:
    """Largest x keeping expected failures <= eps, by bisection to 1e-10."""
    tau = _check_pos_int(tau, "tau")
    _check_eps(epsilon)
    n = _check_n(n)
    _gw_check_regime(mu, "lower", epsilon)
    sat = lambda x: _gw_failure_leq(mu, tau, 1.0 - x**n, epsilon)
    hi = _gw_x_interval_top(mu, n)
    if not sat(0.0):
        raise UnsupportedRegimeError(
            f"even x = 0 violates the failure condition for mu={mu:g}, tau={tau}"
        )
    if sat(hi):
        return hi
    lo = 0.0
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if sat(mid):
            lo = mid
        else:
            hi = mid
    return lo


def gw_bounds(mu: float, tau: int, epsilon: float, n: int = 1) -> tuple[float, float]:
    """(upper, lower) resilience bounds for a branching network of depth tau."""
    return gw_bound_upper(mu, tau, epsilon, n), gw_bound_lower(mu, tau, epsilon, n)


def simulate_extinction_depths(
    dist: BranchingDistribution, max_tau: int = 1000, samples: int = 100_000, seed: int = 0
) -> np.ndarray:
    """Depths at which sampled branching populations die out.

    Returns one entry per sample: the deepest nonempty generation for runs
    that went extinct before max_tau, and 0 for runs still alive at the cap
    (including runs whose population exceeded an internal cap, which are
    certain never to die out up to error eta*^cap).
    """
    max_tau = _check_pos_int(max_tau, "max_tau")
    samples = _check_pos_int(samples, "samples")
    rng = np.random.default_rng(seed)
    z = np.ones(samples, dtype=np.int64)
    tau = np.zeros(samples, dtype=np.int64)
    alive = np.arange(samples)
    depth = 1
    while depth < max_tau and alive.size:
        z_next = dist.level_total(rng, z[alive])
        died = z_next == 0
        tau[alive[died]] = depth
        exploded = z_next > POPULATION_CAP
        keep = ~(died | exploded)
        z[alive] = z_next
        alive = alive[keep]
        depth += 1
    return tau


@dataclass
class GWExpectedBounds:
    """Extinction-time-averaged resilience bounds for a branching network."""

    upper: float
    lower: float
    extinct_fraction: float
    samples: int


def gw_expected_bounds(
    dist: BranchingDistribution,
    epsilon: float,
    n: int = 1,
    max_tau: int = 1000,
    samples: int = 100_000,
    seed: int = 0,
) -> GWExpectedBounds:
    """Average the per-depth bounds over simulated extinction depths.

    The extinction-time distribution has no general closed form, so it is
    estimated by simulating `samples` population chains (depth capped at
    max_tau).  Runs that never die out contribute zero, matching the
    defining sum over finite extinction times only.
    """
    _check_eps(epsilon)
    n = _check_n(n)
    mu = dist.mean
    _gw_check_regime(mu, "upper", epsilon)
    _gw_check_regime(mu, "lower", epsilon)
    taus = simulate_extinction_depths(dist, max_tau=max_tau, samples=samples, seed=seed)
    extinct = taus[taus > 0]
    values, counts = np.unique(extinct, return_counts=True)
    upper = sum(c * gw_bound_upper(mu, int(t), epsilon, n) for t, c in zip(values, counts))
    lower = sum(c * gw_bound_lower(mu, int(t), epsilon, n) for t, c in zip(values, counts))
    return GWExpectedBounds(
        upper=upper / len(taus),
        lower=lower / len(taus),
        extinct_fraction=len(extinct) / len(taus),
        samples=len(taus),
    )


# ---------------------------------------------------------------------------
# Random width-w trellis
# ---------------------------------------------------------------------------


def trellis_bounds(w: int, D: int, p: float, epsilon: float, n: int = 1) -> BoundResult:
    """Regime-labeled resilience bounds for the random width-w trellis.

    Lower bounds equate the proof's expected-failure upper bounds to eps
    (the pw <= 1 constant is 1/(1-pw) for pw < 1 and 1 at pw = 1); upper
    bounds equate its expected-failure lower bounds to (1+eps)K/2.
    """
    w = _check_pos_int(w, "w")
    D = _check_pos_int(D, "D")
    _check_prob(p, "p")
    _check_eps(epsilon, closed_top=True)
    n = _check_n(n)
    K = w * D
    pw = p * w
    if pw > 1.0:
        regime = "pw>1"
        log_lower_xn = (
            math.log(epsilon) + math.log(w) + math.log(pw - 1.0) - math.log(K) - D * math.log(pw)
        )
        lower_raw = math.exp(log_lower_xn / n)
        upper_raw = ((1.0 + epsilon) * w / K) ** (1.0 / n)
    elif pw == 1.0:
        regime = "pw=1"
        lower_raw = (epsilon * w * w / (K * K)) ** (1.0 / n)
        upper_raw = ((1.0 + epsilon) * w * w / K) ** (1.0 / n)
    else:
        regime = "pw<1"
        lower_raw = (epsilon * w * w * (1.0 - pw) / (K * K)) ** (1.0 / n)
        upper_raw = ((1.0 + epsilon) * w * (1.0 - pw) / 2.0) ** (1.0 / n)
    lower, lc = _clamp01(lower_raw)
    upper, uc = _clamp01(upper_raw)
    return BoundResult(
        lower,
        upper,
        regime=regime,
        inputs={"w": w, "D": D, "p": p, "K": K, "epsilon": epsilon, "n": n},
        lower_clamped=lc,
        upper_clamped=uc,
    )
