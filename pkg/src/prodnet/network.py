"""Production-network graph type and basic graph operations.

A production network is a directed graph on products 1..K where an edge
(j, i) means product j is a required input of product i.  Sources (raw
materials) are products with no inputs.  Networks are immutable after
construction and safe to share across workers; derived structures
(adjacency matrix, reachability closure) are computed lazily and cached.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import CyclicGraphError, ParameterError, ValidationError


class ProductionNetwork:
    """Immutable directed graph of products with per-product supplier count.

    Parameters
    ----------
    node_count : number of products K; ids are the dense integers 1..K.
    edges : iterable of (j, i) pairs, j an input of i.
    supplier_count : number of independent suppliers per product (n).
    tiers : optional mapping product id -> tier index.
    acyclic : optional claim; verified when given, computed otherwise.
    """

    __slots__ = (
        "node_count",
        "edges",
        "supplier_count",
        "tiers",
        "acyclic",
        "_succ",
        "_pred",
        "_cache",
    )

    def __init__(
        self,
        node_count: int,
        edges: Iterable[tuple[int, int]],
        supplier_count: int = 1,
        tiers: Optional[Mapping[int, int]] = None,
        acyclic: Optional[bool] = None,
    ):
        if not isinstance(node_count, (int, np.integer)) or node_count < 1:
            raise ParameterError(f"node_count must be a positive integer, got {node_count!r}")
        if not isinstance(supplier_count, (int, np.integer)) or supplier_count < 1:
            raise ParameterError(f"supplier_count must be a positive integer, got {supplier_count!r}")
        k = int(node_count)
        edge_list = []
        seen = set()
        for e in edges:
            j, i = int(e[0]), int(e[1])
            if not (1 <= j <= k and 1 <= i <= k):
                raise ValidationError(f"edge ({j}, {i}) references a node outside 1..{k}")
            if j == i:
                raise ValidationError(f"self-loop on node {j} is not allowed")
            if (j, i) in seen:
                raise ValidationError(f"duplicate edge ({j}, {i})")
            seen.add((j, i))
            edge_list.append((j, i))
        edge_list.sort()

        succ = [[] for _ in range(k + 1)]
        pred = [[] for _ in range(k + 1)]
        for j, i in edge_list:
            succ[j].append(i)
            pred[i].append(j)

        tier_map = None
        if tiers is not None:
            tier_map = {int(v): int(t) for v, t in tiers.items()}
            missing = [v for v in range(1, k + 1) if v not in tier_map]
            if missing:
                raise ValidationError(f"tier labels missing for nodes {missing[:5]}")

        object.__setattr__(self, "node_count", k)
        object.__setattr__(self, "edges", tuple(edge_list))
        object.__setattr__(self, "supplier_count", int(supplier_count))
        object.__setattr__(self, "tiers", tier_map)
        object.__setattr__(self, "_succ", tuple(tuple(s) for s in succ))
        object.__setattr__(self, "_pred", tuple(tuple(p) for p in pred))
        object.__setattr__(self, "_cache", {})

        is_dag = self._check_acyclic()
        if acyclic is True and not is_dag:
            raise ValidationError("network was declared acyclic but contains a cycle")
        object.__setattr__(self, "acyclic", is_dag)

    def __setattr__(self, name, value):
        raise AttributeError("ProductionNetwork is immutable")

    # -- basic accessors -------------------------------------------------

    def successors(self, i: int) -> Sequence[int]:
        """Products that consume product i directly."""
        return self._succ[i]

    def predecessors(self, i: int) -> Sequence[int]:
        """Inputs of product i."""
        return self._pred[i]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def in_degree(self, i: int) -> int:
        return len(self._pred[i])

    def out_degree(self, i: int) -> int:
        return len(self._succ[i])

    @property
    def max_out_degree(self) -> int:
        return max((len(s) for s in self._succ[1:]), default=0)

    @property
    def max_in_degree(self) -> int:
        return max((len(p) for p in self._pred[1:]), default=0)

    def sources(self) -> list[int]:
        """Raw materials: products with no inputs."""
        return [i for i in range(1, self.node_count + 1) if not self._pred[i]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProductionNetwork):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self.edges == other.edges
            and self.supplier_count == other.supplier_count
            and self.tiers == other.tiers
        )

    def __hash__(self):
        return hash((self.node_count, self.edges, self.supplier_count))

    def __repr__(self):
        return (
            f"ProductionNetwork(K={self.node_count}, edges={self.edge_count}, "
            f"n={self.supplier_count}, acyclic={self.acyclic})"
        )

    # -- derived structures (lazy, cached) --------------------------------

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(src, dst) index arrays, 0-based, in canonical sorted edge order."""
        if "edge_arrays" not in self._cache:
            if self.edges:
                src = np.array([j - 1 for j, _ in self.edges], dtype=np.int64)
                dst = np.array([i - 1 for _, i in self.edges], dtype=np.int64)
            else:
                src = np.zeros(0, dtype=np.int64)
                dst = np.zeros(0, dtype=np.int64)
            self._cache["edge_arrays"] = (src, dst)
        return self._cache["edge_arrays"]

    def adjacency_matrix(self) -> np.ndarray:
        """Dense 0/1 adjacency A with A[j-1, i-1] = 1 for each edge (j, i)."""
        if "adjacency" not in self._cache:
            a = np.zeros((self.node_count, self.node_count), dtype=np.float64)
            src, dst = self.edge_arrays()
            a[src, dst] = 1.0
            self._cache["adjacency"] = a
        return self._cache["adjacency"]

    def reachability(self) -> np.ndarray:
        """Boolean closure R with R[j-1, i-1] True iff a path j -> i exists.

        Includes the trivial path, so the diagonal is True.  Valid for
        cyclic graphs as well.
        """
        if "reachability" not in self._cache:
            k = self.node_count
            reach = np.zeros((k, k), dtype=bool)
            for start in range(1, k + 1):
                row = reach[start - 1]
                row[start - 1] = True
                stack = [start]
                while stack:
                    u = stack.pop()
                    for v in self._succ[u]:
                        if not row[v - 1]:
                            row[v - 1] = True
                            stack.append(v)
            self._cache["reachability"] = reach
        return self._cache["reachability"]

    # -- internal ----------------------------------------------------------

    def _check_acyclic(self) -> bool:
        indeg = [len(self._pred[i]) for i in range(self.node_count + 1)]
        ready = [i for i in range(1, self.node_count + 1) if indeg[i] == 0]
        done = 0
        while ready:
            u = ready.pop()
            done += 1
            for v in self._succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    ready.append(v)
        return done == self.node_count


def topological_order(net: ProductionNetwork) -> list[int]:
    """Topological order of an acyclic network, smallest-id-first ties.

    Every edge (j, i) has j earlier than i in the result.  Raises
    CyclicGraphError naming one cycle edge if the network is cyclic.
    """
    k = net.node_count
    indeg = [net.in_degree(i) for i in range(k + 1)]
    heap = [i for i in range(1, k + 1) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        u = heapq.heappop(heap)
        order.append(u)
        for v in net.successors(u):
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(heap, v)
    if len(order) < k:
        edge = _find_cycle_edge(net, {i for i in range(1, k + 1) if indeg[i] > 0})
        raise CyclicGraphError(
            f"network is not acyclic; edge {edge} lies on a cycle", edge=edge
        )
    return order


def _find_cycle_edge(net: ProductionNetwork, remaining: set[int]) -> tuple[int, int]:
    # Iterative DFS restricted to nodes that Kahn's algorithm never released;
    # every such node lies on or feeds a cycle, so a back edge must exist.
    color = {}  # 1 = on stack, 2 = done
    for root in sorted(remaining):
        if color.get(root):
            continue
        stack = [(root, iter(net.successors(root)))]
        color[root] = 1
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if v not in remaining:
                    continue
                c = color.get(v)
                if c == 1:
                    return (u, v)
                if c is None:
                    color[v] = 1
                    stack.append((v, iter(net.successors(v))))
                    advanced = True
                    break
            if not advanced:
                color[u] = 2
                stack.pop()
    raise AssertionError("no cycle edge found among unreleased nodes")


def reverse_graph(net: ProductionNetwork) -> ProductionNetwork:
    """The source-relations view: same nodes, every edge (j, i) flipped."""
    return ProductionNetwork(
        net.node_count,
        [(i, j) for j, i in net.edges],
        supplier_count=net.supplier_count,
        tiers=dict(net.tiers) if net.tiers is not None else None,
    )
