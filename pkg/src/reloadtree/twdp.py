"""Dynamic program over a nice tree decomposition.

A table entry (a t-pair) summarizes a partial spanning forest ``F_hat`` of the
graph processed so far by a compressed forest ``F`` and transfer costs
``alpha``:

* ``F`` keeps the bag vertices (terminals), their neighbors in ``F_hat`` and
  the branching vertices between them.  Every other vertex of ``F_hat`` was
  folded into a vertex or an edge of ``F``; that vertex or edge is its
  *element*.  Branching vertices are unnamed and get canonical negative
  labels.
* ``alpha[x, y]`` is the largest reload cost from terminal ``x`` to a vertex
  folded into element ``y``, defined iff both lie in one component.

Edges touching a terminal are always original graph edges, so their colors
are known.  Every new pair is checked to be *admissible*: every entry is at
most ``k``, and for every terminal ``b`` and two of its branches the two
largest costs plus the reload between the branch edges stay within ``k``.
Every path in the final tree is checked at the node that forgets its
last-forgotten vertex, so the root table is non-empty exactly when a
spanning tree of diameter at most ``k`` exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .decomposition import TreeDecomposition, heuristic_decomposition, validate_decomposition
from .errors import DecompositionError, DisconnectedGraphError, ResourceLimitError
from .graph import Instance, SpanningForest, edge_set_diameter
from .oracle import OracleResult
from .search import search_budget, upper_bound

DEFAULT_TABLE_CAP = 10**6


# -- nice decompositions -----------------------------------------------------


@dataclass
class NiceNode:
    kind: str  # leaf | introduce-vertex | introduce-edge | forget | join
    bag: frozenset
    children: list = field(default_factory=list)
    vertex: Optional[int] = None
    edge: Optional[int] = None


@dataclass
class NiceTriple:
    nodes: list
    root: int

    @property
    def width(self) -> int:
        return max(len(nd.bag) for nd in self.nodes) - 1

    def postorder(self) -> list:
        order, stack = [], [(self.root, False)]
        while stack:
            t, done = stack.pop()
            if done:
                order.append(t)
            else:
                stack.append((t, True))
                stack.extend((c, False) for c in reversed(self.nodes[t].children))
        return order


def build_nice_triple(graph, td: TreeDecomposition) -> NiceTriple:
    """Nice decomposition of equal width with one introduce node per edge.

    Each edge is introduced directly below the forget node of whichever
    endpoint is forgotten first, where both endpoints are still in the bag.
    """
    report = validate_decomposition(graph, td)
    if not report:
        raise DecompositionError(f"{report.axiom}: {report.message}")
    nodes = []

    def add(kind, bag, children=(), vertex=None):
        nodes.append(NiceNode(kind, frozenset(bag), list(children), vertex))
        return len(nodes) - 1

    def transition(t, bag, target):
        cur = set(bag)
        for v in sorted(cur - target):
            cur.discard(v)
            t = add("forget", cur, [t], v)
        for v in sorted(target - cur):
            cur.add(v)
            t = add("introduce-vertex", cur, [t], v)
        return t

    adj = td.neighbors()
    parent = {0: None}
    order = [0]
    for b in order:
        for c in adj[b]:
            if c not in parent:
                parent[c] = b
                order.append(c)
    top = {}
    for b in reversed(order):
        bag = td.bags[b]
        kids = [c for c in adj[b] if parent.get(c) == b and c != parent[b]]
        branches = [transition(top[c], td.bags[c], bag) for c in kids]
        if not branches:
            branches = [transition(add("leaf", ()), frozenset(), bag)]
        t = branches[0]
        for other in branches[1:]:
            t = add("join", bag, [t, other])
        top[b] = t
    root = transition(top[0], td.bags[0], frozenset())

    # splice edge-introduce nodes
    nice_parent = {}
    for t, nd in enumerate(nodes):
        for c in nd.children:
            nice_parent[c] = t
    depth = {root: 0}
    stack = [root]
    while stack:
        t = stack.pop()
        for c in nodes[t].children:
            depth[c] = depth[t] + 1
            stack.append(c)
    forget_at = {nd.vertex: t for t, nd in enumerate(nodes) if nd.kind == "forget"}
    for e, (u, v, _) in enumerate(graph.edges):
        f = max(forget_at[u], forget_at[v], key=lambda t: depth[t])
        child = nodes[f].children[0]
        nodes.append(NiceNode("introduce-edge", nodes[child].bag, [child], edge=e))
        nodes[f].children[0] = len(nodes) - 1
    return NiceTriple(nodes, root)


# -- compressed forests ------------------------------------------------------


def _adjacency(nodes, edges):
    adj = {v: [] for v in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    return adj


def _edge(a, b):
    return (a, b) if a < b else (b, a)


def _elem_key(y):
    return (1,) + y if isinstance(y, tuple) else (0, y)


def reduce_forest(nodes, edges, terminals):
    """Remove degree-1 and dissolve degree-2 vertices outside ``N_F[terminals]``.

    Returns ``(nodes', edges', phi)`` where ``phi`` maps every old vertex and
    edge (as a sorted pair) to the vertex or edge of the reduced forest it was
    folded into.
    """
    adj = {v: set() for v in nodes}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    protected = set(terminals)
    for x in terminals:
        protected |= adj[x]
    for v in nodes:
        if v not in protected and not adj[v]:
            raise ValueError(f"vertex {v} lies in a component without terminals")
    members = {v: [v] for v in nodes}
    for e in edges:
        members[_edge(*e)] = [_edge(*e)]

    def fold(src, dst):
        members.setdefault(dst, []).extend(members.pop(src))

    work = [v for v in nodes if v not in protected]
    while work:
        u = work.pop()
        if u not in adj or u in protected:
            continue
        nbrs = adj[u]
        if len(nbrs) == 1:
            (p,) = nbrs
            fold(u, p)
            fold(_edge(u, p), p)
            adj[p].discard(u)
            del adj[u]
            work.append(p)
        elif len(nbrs) == 2:
            p, q = nbrs
            new = _edge(p, q)
            members[new] = []
            fold(u, new)
            fold(_edge(u, p), new)
            fold(_edge(u, q), new)
            adj[p].discard(u)
            adj[q].discard(u)
            adj[p].add(q)
            adj[q].add(p)
            del adj[u]
        elif not nbrs:
            raise ValueError(f"vertex {u} lies in a component without terminals")
    new_nodes = frozenset(adj)
    new_edges = frozenset(_edge(a, b) for a in adj for b in adj[a] if a < b)
    phi = {}
    for target, olds in members.items():
        for old in olds:
            phi[old] = target
    return new_nodes, new_edges, phi


class TPair:
    """Compressed forest with transfer costs; see the module docstring."""

    __slots__ = ("terminals", "nodes", "edges", "alpha", "_adj", "_key")

    def __init__(self, terminals, nodes, edges, alpha):
        self.terminals = frozenset(terminals)
        self.nodes = frozenset(nodes)
        self.edges = frozenset(edges)
        self.alpha = alpha
        self._adj = None
        self._key = None

    @property
    def adj(self):
        if self._adj is None:
            self._adj = _adjacency(self.nodes, self.edges)
        return self._adj

    def named(self):
        out = set(self.terminals)
        for x in self.terminals:
            out.update(self.adj[x])
        return out

    def elements(self):
        """Vertices of ``F`` plus its edges that touch no terminal."""
        t = self.terminals
        return list(self.nodes) + [e for e in self.edges if e[0] not in t and e[1] not in t]

    def components(self):
        comp = {}
        for s in sorted(self.nodes, key=_elem_key):
            if s in comp:
                continue
            comp[s] = s
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if y not in comp:
                        comp[y] = s
                        stack.append(y)
        return comp

    def canonical(self) -> "TPair":
        """Relabel unnamed vertices by the split of named vertices their removal induces."""
        named = self.named()
        unnamed = [v for v in self.nodes if v not in named]
        if not unnamed:
            return self
        adj = self.adj
        sigs = []
        for x in unnamed:
            parts = []
            for nb in adj[x]:
                part, stack, seen = [], [nb], {x, nb}
                while stack:
                    y = stack.pop()
                    if y in named:
                        part.append(y)
                    for z in adj[y]:
                        if z not in seen:
                            seen.add(z)
                            stack.append(z)
                parts.append(tuple(sorted(part)))
            sigs.append((tuple(sorted(parts)), x))
        sigs.sort()
        if any(a[0] == b[0] for a, b in zip(sigs, sigs[1:])):
            raise AssertionError("unnamed vertices with identical signatures")
        label = {x: -1 - i for i, (_, x) in enumerate(sigs)}
        if all(label[x] == x for x in unnamed):
            return self

        def rn(v):
            return label.get(v, v)

        def re(y):
            return _edge(rn(y[0]), rn(y[1])) if isinstance(y, tuple) else rn(y)

        return TPair(
            self.terminals,
            {rn(v) for v in self.nodes},
            {_edge(rn(a), rn(b)) for a, b in self.edges},
            {(x, re(y)): val for (x, y), val in self.alpha.items()},
        )

    def key(self):
        if self._key is None:
            self._key = (
                tuple(sorted(self.terminals)),
                tuple(sorted(self.nodes)),
                tuple(sorted(self.edges)),
                tuple(sorted(((x, _elem_key(y)), v) for (x, y), v in self.alpha.items())),
            )
        return self._key


def _branch_elements(pair: TPair, b, nb):
    """Elements in the branch of terminal ``b`` that starts with the edge to ``nb``."""
    terms, adj = pair.terminals, pair.adj
    out = [nb]
    stack = [(nb, b)]
    while stack:
        x, px = stack.pop()
        for y in adj[x]:
            if y == px:
                continue
            out.append(y)
            if x not in terms and y not in terms:
                out.append(_edge(x, y))
            stack.append((y, x))
    return out


def is_admissible(pair: TPair, graph, cost, k: int) -> bool:
    """Every transfer cost, and every route through a terminal between two of its branches, is within ``k``."""
    if any(v > k for v in pair.alpha.values()):
        return False
    alpha = pair.alpha
    for b in pair.terminals:
        nbrs = pair.adj[b]
        if len(nbrs) < 2:
            continue
        branch = []
        for nb in nbrs:
            top = max(alpha[(b, y)] for y in _branch_elements(pair, b, nb))
            branch.append((top, graph.color(graph.edge_id(b, nb))))
        for i in range(len(branch)):
            mi, ci = branch[i]
            for j in range(i + 1, len(branch)):
                mj, cj = branch[j]
                if mi + cost[ci][cj] + mj > k:
                    return False
    return True


def check_tpair(pair: TPair, graph) -> None:
    """Assert the structural conditions every table entry must meet."""
    terms = pair.terminals
    if not terms <= pair.nodes:
        raise AssertionError("terminal missing from the forest")
    comp = pair.components()
    if len(pair.edges) != len(pair.nodes) - len(set(comp.values())):
        raise AssertionError("compressed graph is not a forest")
    with_terminal = {comp[x] for x in terms}
    if set(comp.values()) - with_terminal:
        raise AssertionError("component without a terminal")
    for x in terms:
        for y in pair.adj[x]:
            if graph.edge_id(x, y) is None:
                raise AssertionError(f"forest neighbor {y} of {x} is not a graph neighbor")
    named = pair.named()
    w = len(terms)
    unnamed = [v for v in pair.nodes if v not in named]
    if len(unnamed) > max(0, w - 2):
        raise AssertionError(f"{len(unnamed)} unnamed vertices with {w} terminals")
    external_edges = [e for e in pair.edges if e[0] not in named and e[1] not in named]
    if len(external_edges) > max(0, 2 * w - 3):
        raise AssertionError(f"{len(external_edges)} external edges with {w} terminals")
    for v in unnamed:
        if len(pair.adj[v]) < 3:
            raise AssertionError(f"unnamed vertex {v} has degree {len(pair.adj[v])}")
    elements = pair.elements()
    for x in terms:
        for y in elements:
            same = comp[x] == comp[y[0] if isinstance(y, tuple) else y]
            if same != ((x, y) in pair.alpha):
                raise AssertionError(f"transfer cost ({x}, {y}) defined across components or missing")
    if len(pair.alpha) != sum(1 for x in terms for y in elements if comp[x] == comp[y[0] if isinstance(y, tuple) else y]):
        raise AssertionError("transfer cost for a non-element")


def fuse(first: TPair, second: TPair, graph, cost) -> TPair:
    """Union of two edge-disjoint compressed forests on the same terminals.

    The new cost from terminal ``v`` walks the union from ``v``.  Each time the
    route leaves a terminal ``w`` into one forest it charges the reload at
    ``w`` and takes that forest's own costs from ``w`` up to the next terminal.
    The union must be acyclic; a cycle through terminals raises ``ValueError``.
    """
    shift = min((v for v in first.nodes if v < 0), default=0)
    if shift:
        def rn(v):
            return v + shift if v < 0 else v

        def re(y):
            return _edge(rn(y[0]), rn(y[1])) if isinstance(y, tuple) else rn(y)

        second = TPair(
            second.terminals,
            {rn(v) for v in second.nodes},
            {_edge(rn(a), rn(b)) for a, b in second.edges},
            {(x, re(y)): val for (x, y), val in second.alpha.items()},
        )
    terms = first.terminals
    sides = [(first.adj, first.alpha), (second.adj, second.alpha)]
    alpha = {}
    for v in terms:
        alpha[(v, v)] = 0
        reached = {v}
        stack = [(v, 0, None, -1, None)]
        while stack:
            w, dist, in_color, in_side, prev = stack.pop()
            for s, (adj, side_alpha) in enumerate(sides):
                for nb in adj.get(w, ()):
                    if s == in_side and nb == prev:
                        continue
                    col = graph.color(graph.edge_id(w, nb))
                    base = dist if in_color is None else dist + cost[in_color][col]
                    seg = [(nb, w)]
                    while seg:
                        x, px = seg.pop()
                        val = base + side_alpha[(w, x)]
                        alpha[(v, x)] = val
                        if x in terms:
                            if x in reached:
                                raise ValueError("the union of the two forests has a cycle")
                            reached.add(x)
                            stack.append((x, val, graph.color(graph.edge_id(px, x)), s, px))
                            continue
                        for y in adj[x]:
                            if y == px:
                                continue
                            if y not in terms:
                                e = _edge(x, y)
                                alpha[(v, e)] = base + side_alpha[(w, e)]
                            seg.append((y, x))
    return TPair(terms, first.nodes | second.nodes, first.edges | second.edges, alpha)


def _terminal_groups(pair: TPair):
    comp = pair.components()
    groups = {}
    for x in sorted(pair.terminals):
        groups.setdefault(comp[x], []).append(x)
    return list(groups.values())


def _acyclic_union(groups1, groups2) -> bool:
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for grp in groups1:
        for x in grp[1:]:
            parent[find(x)] = find(grp[0])
    for grp in groups2:
        for x in grp[1:]:
            a, b = find(x), find(grp[0])
            if a == b:
                return False
            parent[a] = b
    return True


# -- table processing --------------------------------------------------------


@dataclass
class DPStats:
    max_table: int = 0
    pairs_created: int = 0
    nodes_processed: int = 0


class _Context:
    def __init__(self, instance, k, table_cap, check_invariants):
        self.graph = instance.graph
        self.cost = instance.costs.cost
        self.k = k
        self.cap = table_cap
        self.check = check_invariants
        self.stats = DPStats()

    def insert(self, table, pair, witness):
        """Canonicalize, check admissibility and store; tables map key -> (pair, witness)."""
        self.stats.pairs_created += 1
        pair = pair.canonical()
        if not is_admissible(pair, self.graph, self.cost, self.k):
            return
        if self.check:
            check_tpair(pair, self.graph)
        key = pair.key()
        if key not in table:
            table[key] = (pair, witness)
            if len(table) > self.cap:
                raise ResourceLimitError(f"table exceeded {self.cap} entries")


def process_leaf(ctx):
    return {TPair((), (), (), {}).key(): (TPair((), (), (), {}), frozenset())}


def process_vertex_introduce(ctx, child, v):
    table = {}
    for pair, wit in child.values():
        alpha = dict(pair.alpha)
        alpha[(v, v)] = 0
        ctx.insert(table, TPair(pair.terminals | {v}, pair.nodes | {v}, pair.edges, alpha), wit)
    return table


def process_edge_introduce(ctx, child, edge):
    """Keep every child entry; also add the edge wherever it joins two components."""
    u, v, _ = ctx.graph.edges[edge]
    table = {}
    for pair, wit in child.values():
        ctx.insert(table, pair, wit)
        comp = pair.components()
        if comp[u] == comp[v]:
            continue
        terms = pair.terminals
        alpha = {(x, x): 0 for x in terms}
        alpha[(u, v)] = alpha[(v, u)] = 0
        single = TPair(terms, terms, {_edge(u, v)}, alpha)
        ctx.insert(table, fuse(pair, single, ctx.graph, ctx.cost), wit | {edge})
    return table


def process_forget(ctx, child, v, is_root):
    table = {}
    for pair, wit in child.values():
        comp = pair.components()
        if is_root:
            if len(set(comp.values())) == 1:
                empty = TPair((), (), (), {})
                table.setdefault(empty.key(), (empty, wit))
            continue
        if not any(comp[x] == comp[v] for x in pair.terminals if x != v):
            continue
        terms = pair.terminals - {v}
        nodes, edges, phi = reduce_forest(pair.nodes, pair.edges, terms)
        alpha = {}
        for (x, y), val in pair.alpha.items():
            if x == v:
                continue
            key = (x, phi[y])
            if alpha.get(key, -1) < val:
                alpha[key] = val
        for e in edges:
            if e[0] in terms or e[1] in terms:
                continue
            for x in terms:
                if (x, e) not in alpha and (x, e[0]) in alpha:
                    alpha[(x, e)] = min(alpha[(x, e[0])], alpha[(x, e[1])])
        ctx.insert(table, TPair(terms, nodes, edges, alpha), wit)
    return table


def process_join(ctx, left, right):
    table = {}
    right_items = [(p, w, _terminal_groups(p)) for p, w in right.values()]
    for p1, w1 in left.values():
        g1 = _terminal_groups(p1)
        for p2, w2, g2 in right_items:
            if _acyclic_union(g1, g2):
                ctx.insert(table, fuse(p1, p2, ctx.graph, ctx.cost), w1 | w2)
    return table


def run_dp(instance: Instance, k: int, nice: NiceTriple, table_cap=DEFAULT_TABLE_CAP, check_invariants=False):
    """Root table and statistics for budget ``k``."""
    ctx = _Context(instance, k, table_cap, check_invariants)
    tables = {}
    for t in nice.postorder():
        nd = nice.nodes[t]
        kids = [tables.pop(c) for c in nd.children]
        if nd.kind == "leaf":
            tab = process_leaf(ctx)
        elif nd.kind == "introduce-vertex":
            tab = process_vertex_introduce(ctx, kids[0], nd.vertex)
        elif nd.kind == "introduce-edge":
            tab = process_edge_introduce(ctx, kids[0], nd.edge)
        elif nd.kind == "forget":
            tab = process_forget(ctx, kids[0], nd.vertex, t == nice.root)
        else:
            tab = process_join(ctx, kids[0], kids[1])
        ctx.stats.nodes_processed += 1
        ctx.stats.max_table = max(ctx.stats.max_table, len(tab))
        tables[t] = tab
    return tables[nice.root], ctx.stats


def table_cap_for(instance: Instance, k: int, width: int, ceiling: int = DEFAULT_TABLE_CAP) -> int:
    """Size cap of the shape ``(k+1)^(D w^2) (D w)^w``, clipped to ``ceiling``."""
    delta = max(instance.graph.max_degree(), 1)
    w = max(width + 1, 1)
    log_bound = delta * w * w * _log2(k + 1) + w * _log2(delta * w)
    if log_bound >= ceiling.bit_length():
        return ceiling
    return min(ceiling, int(2**log_bound) + 1)


def _log2(x):
    import math

    return math.log2(x) if x > 0 else 0.0


def solve_fpt_decision(
    instance: Instance,
    td: Optional[TreeDecomposition] = None,
    k: Optional[int] = None,
    table_cap: Optional[int] = None,
    check_invariants: bool = False,
    nice: Optional[NiceTriple] = None,
    stats: Optional[dict] = None,
) -> Optional[SpanningForest]:
    """Witness tree of reload diameter at most ``k`` (default: the instance budget), or None."""
    if k is None:
        k = instance.budget
    if k is None:
        raise ValueError("no budget given")
    graph = instance.graph
    if not graph.is_connected():
        raise DisconnectedGraphError("graph is disconnected; it has no spanning tree")
    if graph.n <= 1:
        return SpanningForest(graph, ())
    if nice is None:
        nice = build_nice_triple(graph, td if td is not None else heuristic_decomposition(graph))
    if table_cap is None:
        table_cap = table_cap_for(instance, k, nice.width)
    root, dp_stats = run_dp(instance, k, nice, table_cap, check_invariants)
    if stats is not None:
        stats["max_table"] = max(stats.get("max_table", 0), dp_stats.max_table)
        stats["pairs_created"] = stats.get("pairs_created", 0) + dp_stats.pairs_created
    if not root:
        return None
    (_, witness), = root.values()
    tree = SpanningForest(graph, witness)
    tree.require_tree()
    if edge_set_diameter(graph, instance.costs, tree.edge_ids) > k:
        raise AssertionError("dynamic program produced a tree above the budget")
    return tree


def solve_fpt(
    instance: Instance,
    td: Optional[TreeDecomposition] = None,
    table_cap: Optional[int] = None,
    check_invariants: bool = False,
    stats: Optional[dict] = None,
) -> OracleResult:
    """Minimum reload diameter by doubling then bisection over the decision DP."""
    graph, costs = instance.graph, instance.costs
    if not graph.is_connected():
        raise DisconnectedGraphError("graph is disconnected; it has no spanning tree")
    nice = build_nice_triple(graph, td if td is not None else heuristic_decomposition(graph))

    def decide(k):
        return solve_fpt_decision(
            instance, k=k, table_cap=table_cap, check_invariants=check_invariants, nice=nice, stats=stats
        )

    def diameter(tree):
        return edge_set_diameter(graph, costs, tree.edge_ids)

    opt, witness, calls = search_budget(decide, upper_bound(instance), diameter)
    return OracleResult(opt, witness, calls)
