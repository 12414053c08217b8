"""Exhaustive ground truth for small instances."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .errors import BudgetExceededError, DisconnectedGraphError
from .graph import ColoredGraph, Instance, SpanningForest, edge_set_diameter

DEFAULT_MAX_TREES = 10**7


@dataclass(frozen=True)
class OracleResult:
    """Optimal diameter with a witness tree.

    ``opt`` is ``None`` when the graph is disconnected.  ``trees_enumerated``
    counts spanning trees visited by exhaustive enumeration; solvers that do
    not enumerate report the number of decision calls they made instead.
    """

    opt: Optional[int]
    witness: Optional[SpanningForest]
    trees_enumerated: int = 0


def kirchhoff_count(graph: ColoredGraph) -> int:
    """Number of spanning trees by the matrix-tree theorem (float determinant, rounded)."""
    if graph.n <= 1:
        return 1
    lap = np.zeros((graph.n, graph.n))
    for u, v, _ in graph.edges:
        lap[u, u] += 1
        lap[v, v] += 1
        lap[u, v] -= 1
        lap[v, u] -= 1
    return int(round(np.linalg.det(lap[1:, 1:])))


def _find(parent, x):
    while parent[x] != x:
        x = parent[x]
    return x


def _can_connect(n, parent, edges, start):
    """Whether the components in ``parent`` plus ``edges[start:]`` form one component."""
    p = list(parent)
    roots = len({_find(p, v) for v in range(n)})
    for u, v, _ in edges[start:]:
        ru, rv = _find(p, u), _find(p, v)
        if ru != rv:
            p[rv] = ru
            roots -= 1
            if roots == 1:
                return True
    return roots == 1


def enumerate_spanning_trees(graph: ColoredGraph) -> Iterator[SpanningForest]:
    """Yield every spanning tree exactly once by branching on include/exclude per edge."""
    if not graph.is_connected():
        raise DisconnectedGraphError("graph is disconnected; it has no spanning tree")
    n, edges = graph.n, graph.edges
    target = max(n - 1, 0)
    chosen = []

    def rec(i, parent):
        if len(chosen) == target:
            yield SpanningForest(graph, chosen)
            return
        if len(edges) - i < target - len(chosen):
            return
        u, v, _ = edges[i]
        ru, rv = _find(parent, u), _find(parent, v)
        if ru != rv:
            merged = list(parent)
            merged[rv] = ru
            chosen.append(i)
            yield from rec(i + 1, merged)
            chosen.pop()
        if _can_connect(n, parent, edges, i + 1):
            yield from rec(i + 1, parent)

    yield from rec(0, list(range(n)))


def solve_bruteforce(instance: Instance, max_trees: int = DEFAULT_MAX_TREES) -> OracleResult:
    """Minimum reload diameter over all spanning trees.

    Raises :class:`BudgetExceededError` before enumerating when the
    matrix-tree count exceeds ``max_trees``.
    """
    graph, costs = instance.graph, instance.costs
    if not graph.is_connected():
        return OracleResult(None, None, 0)
    total = kirchhoff_count(graph)
    if total > max_trees:
        raise BudgetExceededError(f"{total} spanning trees exceed the budget of {max_trees}")
    best, witness, count = None, None, 0
    for tree in enumerate_spanning_trees(graph):
        count += 1
        d = edge_set_diameter(graph, costs, tree.edge_ids)
        if best is None or d < best:
            best, witness = d, tree
    return OracleResult(best, witness, count)


def _bfs_edge_order(graph: ColoredGraph, root: int = 0):
    order, seen_e = [], set()
    seen = {root}
    queue = [root]
    for v in queue:
        for w, e in sorted(graph.neighbors(v)):
            if e not in seen_e:
                seen_e.add(e)
                order.append(e)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return order


def decide_bruteforce(
    instance: Instance, k: Optional[int] = None, max_nodes: int = 5 * 10**7, root: int = 0
):
    """Exact decision ``opt <= k`` by branch and bound over edge subsets.

    A partial forest whose diameter already exceeds ``k`` is discarded, which
    is sound because adding edges never shortens a path.  Returns
    ``(answer, witness_or_None, nodes_explored)``.
    """
    graph, cost = instance.graph, instance.costs.cost
    if k is None:
        k = instance.budget
    if k is None:
        raise ValueError("no budget given")
    if not graph.is_connected():
        return False, None, 0
    if graph.n <= 1:
        return True, SpanningForest(graph, ()), 0
    n = graph.n
    target = max(n - 1, 0)
    order = _bfs_edge_order(graph, root)
    edges = [graph.edges[e] for e in order]
    adj = [[] for _ in range(n)]
    chosen = []
    nodes = 0

    def reach(v, color):
        # max over x in v's component of cost(x -> v) plus the reload onto `color` at v
        best = 0
        stack = [(w, v, c, 0, cost[c][color]) for w, c in adj[v]]
        while stack:
            x, prev, c_in, d, at_v = stack.pop()
            # d is the cost of the path v..x, at_v the reload at v onto the new edge
            if d + at_v > best:
                best = d + at_v
            for y, c in adj[x]:
                if y != prev:
                    stack.append((y, x, c, d + cost[c_in][c], at_v))
        return best

    def rec(i, parent):
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceededError(f"branch and bound exceeded {max_nodes} nodes")
        if len(chosen) == target:
            return True
        if len(edges) - i < target - len(chosen):
            return False
        u, v, col = edges[i]
        ru, rv = _find(parent, u), _find(parent, v)
        if ru != rv and reach(u, col) + reach(v, col) <= k:
            merged = list(parent)
            merged[rv] = ru
            adj[u].append((v, col))
            adj[v].append((u, col))
            chosen.append(order[i])
            if rec(i + 1, merged):
                return True
            chosen.pop()
            adj[u].pop()
            adj[v].pop()
        if _can_connect(n, parent, edges, i + 1):
            return rec(i + 1, parent)
        return False

    if rec(0, list(range(n))):
        tree = SpanningForest(graph, chosen)
        if edge_set_diameter(graph, instance.costs, tree.edge_ids) > k:
            raise AssertionError("branch and bound produced a tree above the budget")
        return True, tree, nodes
    return False, None, nodes
