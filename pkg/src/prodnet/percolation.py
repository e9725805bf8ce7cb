"""Single trials and batches of the node / joint percolation process.

Every product has n suppliers that fail independently with probability x;
a product fails spontaneously when all n fail.  Under joint percolation
each edge additionally stays operational with probability y.  A product
fails iff it is spontaneous or reachable from a spontaneous product along
operational edges, which closes the failure-propagation rule on cyclic
graphs as well.

Randomness layout (the coupling contract): each trial owns a generator
seeded from its own seed; it first draws a (K, n) supplier-uniform block
(row i-1 belongs to product i), then one uniform per edge in canonical
sorted edge order.  A supplier fails at level x iff its uniform is < x,
and an edge is operational iff its uniform is < y.  Evaluating two levels
x1 <= x2 on the same draws therefore yields nested failure sets.

Batches derive trial t's seed from (seed, t) via `derive_subseed`, so
results are reproducible and partitionable across workers regardless of
execution order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .network import ProductionNetwork


@dataclass(frozen=True)
class PercolationConfig:
    """Shock parameters: supplier failure x, edge survival y, suppliers n."""

    x: float
    y: float = 1.0
    n: int = 1
    seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.x <= 1.0):
            raise ParameterError(f"x must lie in [0, 1], got {self.x!r}")
        if not (0.0 <= self.y <= 1.0):
            raise ParameterError(f"y must lie in [0, 1], got {self.y!r}")
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ParameterError(f"seed must be a nonnegative integer, got {self.seed!r}")


@dataclass
class CascadeOutcome:
    """Result of one percolation trial.

    Z[i-1] is 1 iff product i is produced; F and S count failures and
    survivors; spontaneous_failures holds the products whose n suppliers
    all failed.
    """

    Z: np.ndarray
    F: int
    S: int
    spontaneous_failures: frozenset[int]


@dataclass
class BatchResult:
    """Aggregate of a trial batch: per-trial (F, S) and the histogram of F.

    failures holds the full (trials, K) failure-indicator matrix when the
    batch was run with keep_failures=True, else None.
    """

    F: np.ndarray
    S: np.ndarray
    pmf: np.ndarray  # pmf[f] = fraction of trials with exactly f failures
    failures: np.ndarray | None = None

    @property
    def trials(self) -> int:
        return len(self.F)

    def outcomes(self) -> list[tuple[int, int]]:
        return list(zip(self.F.tolist(), self.S.tolist()))


def derive_subseed(seed: int, index: int) -> int:
    """Stable 64-bit mix of (seed, trial index) used to seed trial draws."""
    return int(np.random.SeedSequence((int(seed), int(index))).generate_state(1, np.uint64)[0])


def supplier_maxima(rng: np.random.Generator, node_count: int, n: int) -> np.ndarray:
    """Per-product max of the n supplier uniforms (the first trial draw).

    Product i is a spontaneous failure at level x iff this maximum is < x.
    """
    return rng.random((node_count, n)).max(axis=1)


def _operational_mask(rng: np.random.Generator, edge_count: int, y: float) -> np.ndarray:
    return rng.random(edge_count) < y


def _propagate(net: ProductionNetwork, spont: np.ndarray, op_mask: np.ndarray | None) -> np.ndarray:
    """Failure indicators from spontaneous seeds via forward reachability."""
    k = net.node_count
    failed = spont.copy()
    if op_mask is None:
        stack = list(np.flatnonzero(spont) + 1)
        while stack:
            u = stack.pop()
            for v in net.successors(u):
                if not failed[v - 1]:
                    failed[v - 1] = True
                    stack.append(v)
        return failed
    # joint percolation: walk only operational edges
    op_succ = [[] for _ in range(k + 1)]
    for (j, i), ok in zip(net.edges, op_mask):
        if ok:
            op_succ[j].append(i)
    stack = list(np.flatnonzero(spont) + 1)
    while stack:
        u = stack.pop()
        for v in op_succ[u]:
            if not failed[v - 1]:
                failed[v - 1] = True
                stack.append(v)
    return failed


def _outcome_from_failed(failed: np.ndarray, spont: np.ndarray) -> CascadeOutcome:
    z = (~failed).astype(np.int8)
    f = int(failed.sum())
    return CascadeOutcome(
        Z=z,
        F=f,
        S=len(failed) - f,
        spontaneous_failures=frozenset((np.flatnonzero(spont) + 1).tolist()),
    )


def run_trial(net: ProductionNetwork, cfg: PercolationConfig) -> CascadeOutcome:
    """Execute one percolation trial, deterministic given cfg.seed."""
    rng = np.random.default_rng(cfg.seed)
    maxima = supplier_maxima(rng, net.node_count, cfg.n)
    spont = maxima < cfg.x
    op_mask = None
    if cfg.y < 1.0:
        op_mask = _operational_mask(rng, net.edge_count, cfg.y)
    failed = _propagate(net, spont, op_mask)
    return _outcome_from_failed(failed, spont)


def run_batch(
    net: ProductionNetwork, cfg: PercolationConfig, trials: int, keep_failures: bool = False
) -> BatchResult:
    """Run independent trials with per-trial derived seeds.

    Trial t is exactly `run_trial` with seed `derive_subseed(cfg.seed, t)`,
    so batches can be split and recombined by trial index.  With
    keep_failures=True the (trials, K) failure-indicator matrix is kept in
    the result for per-product statistics.
    """
    if not isinstance(trials, (int, np.integer)) or trials < 1:
        raise ParameterError(f"trials must be a positive integer, got {trials!r}")
    k = net.node_count
    if cfg.y >= 1.0:
        # pure node percolation: reachability closure is shared by all trials
        reach = net.reachability().astype(np.float32)
        spont_rows = np.empty((trials, k), dtype=np.float32)
        for t in range(trials):
            rng = np.random.default_rng(derive_subseed(cfg.seed, t))
            spont_rows[t] = supplier_maxima(rng, k, cfg.n) < cfg.x
        failed = spont_rows @ reach > 0.5
        f_counts = failed.sum(axis=1).astype(np.int64)
    else:
        failed = np.empty((trials, k), dtype=bool)
        for t in range(trials):
            rng = np.random.default_rng(derive_subseed(cfg.seed, t))
            spont = supplier_maxima(rng, k, cfg.n) < cfg.x
            op_mask = _operational_mask(rng, net.edge_count, cfg.y)
            failed[t] = _propagate(net, spont, op_mask)
        f_counts = failed.sum(axis=1).astype(np.int64)
    s_counts = k - f_counts
    pmf = np.bincount(f_counts, minlength=k + 1).astype(np.float64) / trials
    return BatchResult(
        F=f_counts, S=s_counts, pmf=pmf, failures=failed if keep_failures else None
    )


def run_coupled_pair(
    net: ProductionNetwork, cfg: PercolationConfig, x1: float, x2: float
) -> tuple[CascadeOutcome, CascadeOutcome]:
    """One trial evaluated at two failure levels on shared uniforms.

    Requires x1 <= x2; the shared draws make the failure sets nested, so
    S(x1) >= S(x2) holds trialwise and Z(x1) >= Z(x2) pointwise.
    """
    if not (0.0 <= x1 <= 1.0) or not (0.0 <= x2 <= 1.0):
        raise ParameterError("x1 and x2 must lie in [0, 1]")
    if x1 > x2:
        raise ParameterError(f"coupled pair requires x1 <= x2, got {x1} > {x2}")
    rng = np.random.default_rng(cfg.seed)
    maxima = supplier_maxima(rng, net.node_count, cfg.n)
    op_mask = None
    if cfg.y < 1.0:
        op_mask = _operational_mask(rng, net.edge_count, cfg.y)
    outcomes = []
    for x in (x1, x2):
        spont = maxima < x
        failed = _propagate(net, spont, op_mask)
        outcomes.append(_outcome_from_failed(failed, spont))
    return outcomes[0], outcomes[1]
