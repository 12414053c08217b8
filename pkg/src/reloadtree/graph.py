"""Edge-colored graphs, reload-cost tables and reload-cost evaluation on trees.

A path ``v0, v1, ..., vl`` pays ``cost[color(e_{i-1})][color(e_i)]`` at every
interior vertex and nothing at its endpoints, so paths with at most one edge
cost zero.  All the quantities below (distances, eccentricities, diameters)
are measured on forests, where the path between two vertices is unique.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InvalidGraphError, InvalidPathError, NotATreeError

#: Largest admissible cost entry (costs are unsigned 64-bit values).
MAX_COST = 2**64 - 1


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class ColoredGraph:
    """Simple undirected graph on vertices ``0..n-1`` with one color per edge.

    Edges are stored normalized as ``(u, v, color)`` with ``u < v``; the edge
    index is its position in :attr:`edges`.
    """

    n: int
    edges: tuple = ()
    _adj: tuple = field(default=(), init=False, repr=False, compare=False)
    _index: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise InvalidGraphError("vertex count must be non-negative")
        normalized = []
        index = {}
        adj = [[] for _ in range(self.n)]
        for i, edge in enumerate(self.edges):
            u, v, color = (int(x) for x in edge)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidGraphError(f"edge {i} ({u}, {v}) has a vertex outside [0, {self.n})")
            if u == v:
                raise InvalidGraphError(f"edge {i} is a self-loop at {u}")
            if color < 0:
                raise InvalidGraphError(f"edge {i} has negative color {color}")
            if u > v:
                u, v = v, u
            if (u, v) in index:
                raise InvalidGraphError(f"parallel edge {{{u}, {v}}}")
            index[(u, v)] = i
            normalized.append((u, v, color))
            adj[u].append((v, i))
            adj[v].append((u, i))
        object.__setattr__(self, "edges", tuple(normalized))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_adj", tuple(tuple(a) for a in adj))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int):
        """Pairs ``(w, edge_index)`` for every edge incident to ``v``."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def edge_id(self, u: int, v: int) -> Optional[int]:
        if u > v:
            u, v = v, u
        return self._index.get((u, v))

    def color(self, edge: int) -> int:
        return self.edges[edge][2]

    def num_colors_used(self) -> int:
        return 1 + max((e[2] for e in self.edges), default=-1)

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w, _ in self._adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def is_forest(self) -> bool:
        uf = _UnionFind(self.n)
        return all(uf.union(u, v) for u, v, _ in self.edges)

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        for i, (u, v, c) in enumerate(self.edges):
            g.add_edge(u, v, color=c, index=i)
        return g


@dataclass(frozen=True)
class ReloadCostTable:
    """Symmetric, non-negative reload cost matrix indexed by color pairs."""

    num_colors: int
    cost: tuple = ()

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.cost)
        if len(rows) != self.num_colors or any(len(r) != self.num_colors for r in rows):
            raise InvalidGraphError(f"cost table must be {self.num_colors}x{self.num_colors}")
        for a in range(self.num_colors):
            for b in range(self.num_colors):
                x = rows[a][b]
                if x < 0 or x > MAX_COST:
                    raise InvalidGraphError(f"cost[{a}][{b}] = {x} outside [0, 2^64)")
                if x != rows[b][a]:
                    raise InvalidGraphError(f"cost table is not symmetric at ({a}, {b})")
        object.__setattr__(self, "cost", rows)

    @classmethod
    def zeros(cls, num_colors: int) -> "ReloadCostTable":
        return cls(num_colors, tuple((0,) * num_colors for _ in range(num_colors)))

    @classmethod
    def from_matrix(cls, matrix) -> "ReloadCostTable":
        rows = [list(map(int, row)) for row in matrix]
        return cls(len(rows), tuple(tuple(r) for r in rows))

    @classmethod
    def from_pairs(cls, num_colors: int, pairs: dict, default: int = 0) -> "ReloadCostTable":
        """Build a table from ``{(a, b): cost}``; unlisted pairs get ``default``.

        Diagonal entries not listed are zero (traversing two edges of the same
        color is free unless stated otherwise).
        """
        rows = [[default] * num_colors for _ in range(num_colors)]
        for a in range(num_colors):
            rows[a][a] = 0
        for (a, b), x in pairs.items():
            rows[a][b] = x
            rows[b][a] = x
        return cls(num_colors, tuple(tuple(r) for r in rows))

    def __call__(self, a: int, b: int) -> int:
        return self.cost[a][b]

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.cost, dtype=np.uint64).reshape(self.num_colors, self.num_colors)

    def max_entry(self) -> int:
        return max((max(r) for r in self.cost), default=0)

    def scaled(self, factor: int) -> "ReloadCostTable":
        return ReloadCostTable(self.num_colors, tuple(tuple(x * factor for x in r) for r in self.cost))


@dataclass(frozen=True)
class Instance:
    """A Diameter-Tree input: graph, reload costs and an optional budget ``k``."""

    graph: ColoredGraph
    costs: ReloadCostTable
    budget: Optional[int] = None

    def __post_init__(self):
        used = self.graph.num_colors_used()
        if used > self.costs.num_colors:
            raise InvalidGraphError(
                f"graph uses color {used - 1} but the cost table has {self.costs.num_colors} colors"
            )
        if self.budget is not None and self.budget < 0:
            raise InvalidGraphError("budget must be non-negative")

    def with_budget(self, k: Optional[int]) -> "Instance":
        return Instance(self.graph, self.costs, k)


class SpanningForest:
    """An acyclic subset of the edges of a :class:`ColoredGraph`."""

    __slots__ = ("graph", "edge_ids", "_adj", "_labels", "_ncomp")

    def __init__(self, graph: ColoredGraph, edge_ids: Iterable[int]):
        self.graph = graph
        self.edge_ids = frozenset(int(e) for e in edge_ids)
        uf = _UnionFind(graph.n)
        adj = [[] for _ in range(graph.n)]
        for e in sorted(self.edge_ids):
            if not 0 <= e < graph.m:
                raise InvalidGraphError(f"edge index {e} out of range")
            u, v, c = graph.edges[e]
            if not uf.union(u, v):
                raise NotATreeError(f"edge {e} = {{{u}, {v}}} closes a cycle")
            adj[u].append((v, c))
            adj[v].append((u, c))
        self._adj = adj
        labels = [uf.find(v) for v in range(graph.n)]
        remap = {}
        self._labels = [remap.setdefault(x, len(remap)) for x in labels]
        self._ncomp = len(remap)

    def __repr__(self):
        return f"SpanningForest(edges={sorted(self.edge_ids)})"

    def __eq__(self, other):
        return (
            isinstance(other, SpanningForest)
            and self.graph == other.graph
            and self.edge_ids == other.edge_ids
        )

    def __hash__(self):
        return hash(self.edge_ids)

    @property
    def num_components(self) -> int:
        return self._ncomp

    def component(self, v: int) -> int:
        return self._labels[v]

    def is_spanning_tree(self) -> bool:
        return self._ncomp == 1 and len(self.edge_ids) == max(self.graph.n - 1, 0)

    def require_tree(self) -> None:
        if not self.is_spanning_tree():
            raise NotATreeError(f"forest has {self._ncomp} components, not a spanning tree")

    def edges(self):
        return [self.graph.edges[e] for e in sorted(self.edge_ids)]

    def distances_from(self, costs: ReloadCostTable, source: int) -> list:
        """Reload distance from ``source`` to every vertex (``None`` if unreachable)."""
        return _distances(self._adj, costs.cost, source, self.graph.n)


def _distances(adj, cost, source, n):
    dist = [None] * n
    dist[source] = 0
    stack = []
    for w, c in adj[source]:
        dist[w] = 0
        stack.append((w, source, c, 0))
    while stack:
        v, parent, c_in, d = stack.pop()
        row = cost[c_in]
        for w, c in adj[v]:
            if w != parent:
                dw = d + row[c]
                dist[w] = dw
                stack.append((w, v, c, dw))
    return dist


def _forest_adjacency(graph: ColoredGraph, edge_ids: Iterable[int]):
    adj = {}
    for e in edge_ids:
        u, v, c = graph.edges[e]
        adj.setdefault(u, []).append((v, c))
        adj.setdefault(v, []).append((u, c))
    return adj


def edge_set_diameter(graph: ColoredGraph, costs: ReloadCostTable, edge_ids: Iterable[int]) -> int:
    """Largest reload distance between two vertices joined by the forest ``edge_ids``.

    The edge set must be acyclic; isolated vertices contribute zero.
    """
    adj = _forest_adjacency(graph, edge_ids)
    cost = costs.cost
    best = 0
    for s in adj:
        stack = [(w, s, c, 0) for w, c in adj[s]]
        while stack:
            v, parent, c_in, d = stack.pop()
            if d > best:
                best = d
            row = cost[c_in]
            for w, c in adj[v]:
                if w != parent:
                    stack.append((w, v, c, d + row[c]))
    return best


def edge_set_eccentricity(
    graph: ColoredGraph, costs: ReloadCostTable, edge_ids: Iterable[int], source: int
) -> int:
    """Eccentricity of ``source`` in the component of the forest ``edge_ids`` containing it."""
    adj = _forest_adjacency(graph, edge_ids)
    cost = costs.cost
    best = 0
    stack = [(w, source, c, 0) for w, c in adj.get(source, ())]
    while stack:
        v, parent, c_in, d = stack.pop()
        if d > best:
            best = d
        row = cost[c_in]
        for w, c in adj[v]:
            if w != parent:
                stack.append((w, v, c, d + row[c]))
    return best


def path_reload_cost(graph: ColoredGraph, costs: ReloadCostTable, path: Sequence[int]) -> int:
    """Reload cost of a simple path given as a vertex sequence."""
    if len(set(path)) != len(path):
        raise InvalidPathError("path repeats a vertex")
    colors = []
    for a, b in zip(path, path[1:]):
        e = graph.edge_id(a, b)
        if e is None:
            raise InvalidPathError(f"vertices {a} and {b} are not adjacent")
        colors.append(graph.color(e))
    return sum(costs.cost[x][y] for x, y in zip(colors, colors[1:]))


def reload_distance(tree: SpanningForest, costs: ReloadCostTable, u: int, v: int) -> Optional[int]:
    """Reload cost of the ``u``-``v`` path in ``tree``; ``None`` when they are disconnected."""
    if u == v:
        return 0
    if tree.component(u) != tree.component(v):
        return None
    return tree.distances_from(costs, u)[v]


def eccentricity(tree: SpanningForest, costs: ReloadCostTable, v: int) -> int:
    return max(d for d in tree.distances_from(costs, v) if d is not None)


def tree_diameter(tree: SpanningForest, costs: ReloadCostTable) -> int:
    """Maximum reload distance over all vertex pairs of a spanning tree."""
    tree.require_tree()
    return edge_set_diameter(tree.graph, costs, tree.edge_ids)


def check_triangle_inequality(graph: ColoredGraph, costs: ReloadCostTable) -> bool:
    """True iff ``c(e1, e3) <= c(e1, e2) + c(e2, e3)`` for distinct edges at a common vertex."""
    cost = costs.cost
    for v in range(graph.n):
        colors = [graph.color(e) for _, e in graph.neighbors(v)]
        d = len(colors)
        if d < 3:
            continue
        for i in range(d):
            for j in range(d):
                if j == i:
                    continue
                for h in range(d):
                    if h == i or h == j:
                        continue
                    a, b, c = colors[i], colors[j], colors[h]
                    if cost[a][c] > cost[a][b] + cost[b][c]:
                        return False
    return True
