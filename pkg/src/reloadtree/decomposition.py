"""Tree decompositions: validation and a min-fill elimination heuristic."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph import ColoredGraph


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed ``0..len(bags)-1`` joined by the undirected ``tree_edges``."""

    n: int
    bags: tuple
    tree_edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        object.__setattr__(self, "tree_edges", tuple((int(a), int(b)) for a, b in self.tree_edges))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbors(self):
        adj = [[] for _ in self.bags]
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    axiom: Optional[str] = None
    message: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def validate_decomposition(graph: ColoredGraph, td: TreeDecomposition) -> ValidationReport:
    """Check the tree shape and the three decomposition axioms; report the first failure."""
    nb = len(td.bags)
    if nb == 0:
        return ValidationReport(False, "tree", "decomposition has no bags")
    for a, b in td.tree_edges:
        if not (0 <= a < nb and 0 <= b < nb) or a == b:
            return ValidationReport(False, "tree", f"invalid tree edge ({a}, {b})", (a, b))
    if len(td.tree_edges) != nb - 1:
        return ValidationReport(False, "tree", f"{nb} bags need {nb - 1} tree edges, got {len(td.tree_edges)}")
    adj = td.neighbors()
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != nb:
        return ValidationReport(False, "tree", "bag tree is disconnected")
    for bag in td.bags:
        for v in bag:
            if not 0 <= v < graph.n:
                return ValidationReport(False, "vertex-coverage", f"bag vertex {v} is not a graph vertex", (v,))
    covered = set().union(*td.bags)
    for v in range(graph.n):
        if v not in covered:
            return ValidationReport(False, "vertex-coverage", f"vertex {v} is in no bag", (v,))
    for i, (u, v, _) in enumerate(graph.edges):
        if not any(u in bag and v in bag for bag in td.bags):
            return ValidationReport(False, "edge-coverage", f"edge {i} = {{{u}, {v}}} is in no bag", (u, v))
    for v in range(graph.n):
        holders = {i for i, bag in enumerate(td.bags) if v in bag}
        start = min(holders)
        reach = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in holders and y not in reach:
                    reach.add(y)
                    stack.append(y)
        if reach != holders:
            return ValidationReport(
                False, "connectivity", f"bags containing vertex {v} are not connected", (v, tuple(sorted(holders)))
            )
    return ValidationReport(True)


def min_fill_order(graph: ColoredGraph) -> list:
    """Elimination order choosing the vertex with fewest fill edges, lowest id on ties."""
    adj = [set(w for w, _ in graph.neighbors(v)) for v in range(graph.n)]
    alive = set(range(graph.n))
    order = []
    while alive:
        best, best_fill = None, None
        for v in sorted(alive):
            nbrs = sorted(adj[v])
            fill = 0
            for i, a in enumerate(nbrs):
                for b in nbrs[i + 1:]:
                    if b not in adj[a]:
                        fill += 1
            if best_fill is None or fill < best_fill:
                best, best_fill = v, fill
                if fill == 0:
                    break
        nbrs = adj[best]
        for a in nbrs:
            adj[a] |= nbrs - {a}
            adj[a].discard(best)
        alive.discard(best)
        order.append(best)
        adj[best] = set()
    return order


def decomposition_from_order(graph: ColoredGraph, order) -> TreeDecomposition:
    """Tree decomposition induced by an elimination order."""
    n = graph.n
    if n == 0:
        return TreeDecomposition(0, (frozenset(),), ())
    position = {v: i for i, v in enumerate(order)}
    adj = [set(w for w, _ in graph.neighbors(v)) for v in range(n)]
    bags = []
    parent_vertex = []
    for v in order:
        nbrs = set(adj[v])
        bags.append(frozenset(nbrs | {v}))
        later = [w for w in nbrs]
        parent_vertex.append(min(later, key=position.__getitem__) if later else None)
        for a in nbrs:
            adj[a] |= nbrs - {a}
            adj[a].discard(v)
    tree_edges = []
    roots = []
    for i, pv in enumerate(parent_vertex):
        if pv is None:
            roots.append(i)
        else:
            tree_edges.append((i, position[pv]))
    # join the trees of different components into one
    for a, b in zip(roots, roots[1:]):
        tree_edges.append((a, b))
    return _contract_subset_bags(TreeDecomposition(n, tuple(bags), tuple(tree_edges)))


def _contract_subset_bags(td: TreeDecomposition) -> TreeDecomposition:
    """Merge every bag that is contained in a neighboring bag into that neighbor."""
    bags = list(td.bags)
    adj = [set(x) for x in td.neighbors()]
    alive = set(range(len(bags)))
    changed = True
    while changed:
        changed = False
        for i in sorted(alive):
            for j in sorted(adj[i]):
                if bags[i] <= bags[j]:
                    for x in adj[i]:
                        if x != j:
                            adj[x].discard(i)
                            adj[x].add(j)
                            adj[j].add(x)
                    adj[j].discard(i)
                    adj[i] = set()
                    alive.discard(i)
                    changed = True
                    break
            if changed:
                break
    keep = sorted(alive)
    index = {b: i for i, b in enumerate(keep)}
    edges = sorted({(min(index[a], index[b]), max(index[a], index[b])) for a in keep for b in adj[a]})
    return TreeDecomposition(td.n, tuple(bags[b] for b in keep), tuple(edges))


def heuristic_decomposition(graph: ColoredGraph) -> TreeDecomposition:
    """Min-fill tree decomposition; valid for any graph, no width guarantee."""
    return decomposition_from_order(graph, min_fill_order(graph))


def trivial_decomposition(graph: ColoredGraph) -> TreeDecomposition:
    return TreeDecomposition(graph.n, (frozenset(range(graph.n)),), ())
