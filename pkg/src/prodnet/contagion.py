"""Upper bounds on expected cascade size via the union-bound program.

The per-product failure-probability bounds beta solve a box-constrained
linear program.  On DAGs a single pass in topological order solves it
exactly; with edge survival y <= 1/Delta (Delta the max out-degree) the
same optimum is the greatest fixed point of a monotone operator; and
under the stricter spectral condition y < 1/Delta it collapses to a Katz
centrality scaled by the spontaneous-failure probability x^n.  No LP
solver is embedded: these three routes cover every regime in use, and
anything else is reported as unsupported.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConvergenceError, CyclicGraphError, ParameterError, PreconditionError
from .network import ProductionNetwork, topological_order

_KATZ_DENSE_LIMIT = 2000


@dataclass
class BetaVector:
    """Per-product failure-probability upper bounds with solve metadata."""

    beta: np.ndarray
    method: str  # dag-linear | fixed-point | katz-closed-form
    iterations: int = 0
    residual: float = 0.0

    def total(self) -> float:
        """The expected-failure upper bound: sum of the per-product bounds."""
        return float(self.beta.sum())


def _check_xyn(x, y, n):
    if not (0.0 <= x <= 1.0):
        raise ParameterError(f"x must lie in [0, 1], got {x!r}")
    if not (0.0 <= y <= 1.0):
        raise ParameterError(f"y must lie in [0, 1], got {y!r}")
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")


def dag_beta(net: ProductionNetwork, x: float, y: float, n: int = 1) -> BetaVector:
    """Exact program optimum on a DAG by one pass in topological order.

    beta of every source is x^n; downstream, beta_i = min(1, y * sum of
    input betas + x^n).  Linear in K + |E|.
    """
    _check_xyn(x, y, n)
    if not net.acyclic:
        raise CyclicGraphError("dag_beta requires an acyclic network")
    xn = x**n
    beta = np.zeros(net.node_count, dtype=np.float64)
    for v in topological_order(net):
        acc = xn
        for j in net.predecessors(v):
            acc += y * beta[j - 1]
        beta[v - 1] = min(1.0, acc)
    return BetaVector(beta=beta, method="dag-linear")


def contraction_step(
    net: ProductionNetwork,
    beta: np.ndarray,
    x: float,
    y: float,
    n: int = 1,
    spontaneous: Optional[np.ndarray] = None,
) -> np.ndarray:
    """One application of the monotone operator min(1, y A^T beta + x^n).

    `spontaneous` optionally replaces the uniform x^n vector (used by
    interventions, where protected products have their term zeroed).
    """
    _check_xyn(x, y, n)
    src, dst = net.edge_arrays()
    if spontaneous is None:
        acc = np.full(net.node_count, x**n)
    else:
        acc = np.array(spontaneous, dtype=np.float64)
    np.add.at(acc, dst, y * beta[src])
    return np.minimum(1.0, acc)


def fixed_point_beta(
    net: ProductionNetwork,
    x: float,
    y: float,
    n: int = 1,
    tol: float = 1e-12,
    max_iter: int = 10**6,
    allow_above_threshold: bool = False,
    spontaneous: Optional[np.ndarray] = None,
) -> BetaVector:
    """Greatest fixed point of the operator, iterated down from all-ones.

    Valid as the program optimum when y <= 1/Delta (max out-degree); above
    that threshold the call is refused unless allow_above_threshold is set,
    in which case the fixed point is still computed but is not guaranteed
    to solve the program.
    """
    _check_xyn(x, y, n)
    if not isinstance(max_iter, (int, np.integer)) or max_iter < 1:
        raise ParameterError(f"max_iter must be a positive integer, got {max_iter!r}")
    delta = net.max_out_degree
    if delta > 0 and y > 1.0 / delta:
        if not allow_above_threshold:
            raise PreconditionError(
                f"fixed-point/program equivalence needs y <= 1/Delta = {1.0 / delta:g}, "
                f"got y = {y:g}; pass allow_above_threshold=True to compute it anyway"
            )
        warnings.warn(
            "y exceeds 1/Delta: computing the fixed point, but it need not equal "
            "the program optimum",
            stacklevel=2,
        )
    beta = np.ones(net.node_count, dtype=np.float64)
    for it in range(1, max_iter + 1):
        nxt = contraction_step(net, beta, x, y, n, spontaneous=spontaneous)
        residual = float(np.max(np.abs(nxt - beta))) if net.node_count else 0.0
        beta = nxt
        if residual < tol:
            return BetaVector(beta=beta, method="fixed-point", iterations=it, residual=residual)
    raise ConvergenceError(
        f"fixed-point iteration did not reach tol={tol:g} within {max_iter} iterations",
        residual=residual,
    )


def _spectral_threshold(net: ProductionNetwork) -> float:
    delta = net.max_out_degree
    return math.inf if delta == 0 else 1.0 / delta


def katz_centrality(net: ProductionNetwork, y: float, tol: float = 1e-12) -> np.ndarray:
    """Katz vector (I - y A^T)^{-1} 1, requiring y < 1/Delta.

    Solved densely up to 2000 nodes, otherwise by the convergent Neumann
    iteration gamma <- y A^T gamma + 1.
    """
    if y < 0.0:
        raise ParameterError(f"y must be nonnegative, got {y!r}")
    if y >= _spectral_threshold(net):
        raise PreconditionError(
            f"Katz centrality needs y < 1/Delta = {_spectral_threshold(net):g}, got y = {y:g}"
        )
    k = net.node_count
    if k <= _KATZ_DENSE_LIMIT:
        a = net.adjacency_matrix()
        gamma = np.linalg.solve(np.eye(k) - y * a.T, np.ones(k))
        return gamma
    src, dst = net.edge_arrays()
    gamma = np.ones(k, dtype=np.float64)
    for it in range(10**6):
        nxt = np.ones(k, dtype=np.float64)
        np.add.at(nxt, dst, y * gamma[src])
        residual = float(np.max(np.abs(nxt - gamma)))
        gamma = nxt
        if residual < tol:
            return gamma
    raise ConvergenceError("Neumann iteration for Katz centrality did not converge", residual=residual)


def katz_beta(net: ProductionNetwork, x: float, y: float, n: int = 1) -> BetaVector:
    """Closed-form program solution x^n * Katz(net, y).

    Equals the fixed point (and hence the program optimum) when
    0 <= y < 1/Delta and x < (1 - y Delta)^(1/n).
    """
    _check_xyn(x, y, n)
    delta = net.max_out_degree
    if y >= _spectral_threshold(net):
        raise PreconditionError(
            f"katz_beta needs y < 1/Delta = {_spectral_threshold(net):g}, got y = {y:g}"
        )
    x_cap = (1.0 - y * delta) ** (1.0 / n) if delta > 0 else 1.0
    if x >= x_cap and x_cap < 1.0:
        raise PreconditionError(
            f"katz_beta needs x < (1 - y Delta)^(1/n) = {x_cap:g}, got x = {x:g}"
        )
    gamma = katz_centrality(net, y)
    return BetaVector(beta=(x**n) * gamma, method="katz-closed-form")


@dataclass
class KatzResilienceBound:
    """Katz-based resilience lower bound plus precondition bookkeeping.

    precondition_ok records whether the returned x itself satisfies the
    closed form's x-condition; the bound is valid either way.
    """

    value: float
    precondition_ok: bool
    clamped: bool


def resilience_lb_katz(net: ProductionNetwork, y: float, epsilon: float, n: int = 1) -> KatzResilienceBound:
    """Resilience lower bound (eps / sum of Katz centralities)^(1/n)."""
    if not (0.0 < epsilon < 1.0):
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    gamma = katz_centrality(net, y)
    raw = (epsilon / float(gamma.sum())) ** (1.0 / n)
    value = min(1.0, max(0.0, raw))
    delta = net.max_out_degree
    x_cap = (1.0 - y * delta) ** (1.0 / n) if delta > 0 else 1.0
    return KatzResilienceBound(
        value=value, precondition_ok=value < x_cap or x_cap >= 1.0, clamped=value != raw
    )


def dag_sparse_bound(K: int, x: float, y: float, n: int = 1) -> float:
    """Closed-form expected-failure bound x^n e^{Ky} / y for any DAG."""
    if not isinstance(K, (int, np.integer)) or K < 1:
        raise ParameterError(f"K must be a positive integer, got {K!r}")
    if not (0.0 < y <= 1.0):
        raise ParameterError(f"y must lie in (0, 1], got {y!r}")
    _check_xyn(x, y, n)
    return (x**n) * math.exp(K * y) / y


def dag_resilience_lb(K: int, epsilon: float, n: int = 1) -> float:
    """Universal DAG resilience lower bound (eps / (e K))^(1/n) at y = 1/K."""
    if not isinstance(K, (int, np.integer)) or K < 1:
        raise ParameterError(f"K must be a positive integer, got {K!r}")
    if not (0.0 < epsilon < 1.0):
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    return min(1.0, (epsilon / (math.e * K)) ** (1.0 / n))


def vulnerability_ranking(
    net: ProductionNetwork, x: float, y: float, n: int = 1
) -> list[tuple[int, float]]:
    """Products ordered most-vulnerable-first by their beta bound.

    Uses the DAG pass when the network is acyclic, the fixed point
    otherwise; ties break by ascending product id for determinism.
    """
    if net.acyclic:
        bv = dag_beta(net, x, y, n)
    else:
        bv = fixed_point_beta(net, x, y, n)
    order = sorted(range(1, net.node_count + 1), key=lambda i: (-bv.beta[i - 1], i))
    return [(i, float(bv.beta[i - 1])) for i in order]
