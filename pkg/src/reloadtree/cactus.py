"""Exact polynomial-time solver on cacti.

The block tree is processed bottom-up.  For a block ``B`` and one of its
edges ``e`` the partial solution ``lambda_B(e)`` is a spanning tree of the
subgraph hanging below ``B`` (minus ``e`` for a cycle block) with reload
diameter at most ``k`` that minimizes the eccentricity of the anchor on each
side of ``e``.

Each child cycle ``C`` of ``B`` contributes two ladders of side trees.  With
the cycle written ``a = c_0, c_1, ..., c_{m-1}``, the left ladder holds
``L_0 .. L_{m-1}`` where ``L_i`` spans ``c_1 .. c_i`` and everything below
them, and the right ladder holds ``R_1 .. R_m`` where ``R_j`` spans
``c_j .. c_{m-1}``.  ``L_0`` and ``R_m`` are the trivial tree ``{a}``.  In an
assignment ``L_i`` is true when the removed edge of ``C`` lies at position
``>= i`` and ``R_j`` is true when it lies at position ``< j``, so the choice
for ``C`` is read off the largest true ``L`` and the smallest true ``R``.
The clauses are:

* ladder implications ``L_i -> L_{i-1}`` and ``R_j -> R_{j+1}``;
* for every non-anchor vertex ``c_i`` exactly one of ``L_i`` and ``R_i``;
* ``not R1 or not R2`` whenever the union of the fixed part ``T^e`` with
  ``R1`` and ``R2`` has diameter above ``k``.

Members whose side tree does not exist, or whose union with ``T^e`` already
breaks the diameter or eccentricity bounds, are fixed to false.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import DisconnectedGraphError, NotACactusError
from .graph import Instance, SpanningForest, edge_set_diameter
from .oracle import OracleResult
from .search import search_budget, upper_bound
from .twosat import TwoSatFormula, solve_2sat


# -- block tree --------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    """A cycle or single-edge block.

    ``vertices`` starts at the anchor.  For a cycle it follows the cycle
    order, and ``edges[i]`` joins ``vertices[i]`` and ``vertices[i+1 mod m]``.
    """

    kind: str
    vertices: tuple
    edges: tuple

    @property
    def anchor(self) -> int:
        return self.vertices[0]


@dataclass(frozen=True)
class BlockTree:
    blocks: tuple
    parent: tuple
    children: tuple
    cut_vertices: frozenset
    root_block: int
    root_vertex: int

    def anchor(self, b: int) -> int:
        return self.blocks[b].anchor

    def children_at(self, b: int) -> dict:
        """Map non-anchor vertex of block ``b`` -> child block ids attached there."""
        out = {}
        for c in self.children[b]:
            out.setdefault(self.blocks[c].anchor, []).append(c)
        return out

    def postorder(self) -> list:
        order = []
        stack = [(self.root_block, False)]
        while stack:
            b, done = stack.pop()
            if done:
                order.append(b)
            else:
                stack.append((b, True))
                for c in reversed(self.children[b]):
                    stack.append((c, False))
        return order


def compute_block_tree(graph) -> BlockTree:
    """Blocks of a connected cactus rooted at its lowest-id non-cut vertex."""
    import networkx as nx

    if not graph.is_connected():
        raise DisconnectedGraphError("block tree needs a connected graph")
    if graph.m == 0:
        return BlockTree((), (), (), frozenset(), -1, 0)
    g = graph.to_networkx()
    raw = []
    for comp in nx.biconnected_component_edges(g):
        ids = sorted(graph.edge_id(u, v) for u, v in comp)
        verts = sorted({x for e in ids for x in graph.edges[e][:2]})
        raw.append((verts, ids))
    raw.sort()
    membership = {}
    for i, (verts, ids) in enumerate(raw):
        if len(ids) > 1:
            inner = {v: 0 for v in verts}
            for e in ids:
                u, v, _ = graph.edges[e]
                inner[u] += 1
                inner[v] += 1
            if len(ids) != len(verts) or any(d != 2 for d in inner.values()):
                raise NotACactusError(
                    f"block on vertices {verts} with {len(ids)} edges is neither a cycle nor an edge",
                    block=tuple(verts),
                )
        for v in verts:
            membership.setdefault(v, []).append(i)
    cut = frozenset(v for v, bs in membership.items() if len(bs) > 1)
    root_vertex = min(v for v in range(graph.n) if v not in cut)
    root_raw = membership[root_vertex][0]

    blocks = [None] * len(raw)
    parent = [-1] * len(raw)
    children = [[] for _ in raw]
    order = [(root_raw, root_vertex)]
    for b, anchor in order:
        blocks[b] = _orient(graph, raw[b], anchor)
        for v in blocks[b].vertices[1:]:
            for c in membership[v]:
                if c != b:
                    parent[c] = b
                    children[b].append(c)
                    order.append((c, v))
    # renumber in discovery order so the root is block 0
    index = {b: i for i, (b, _) in enumerate(order)}
    new_blocks = tuple(blocks[b] for b, _ in order)
    new_parent = tuple(index[parent[b]] if parent[b] >= 0 else -1 for b, _ in order)
    new_children = tuple(tuple(index[c] for c in children[b]) for b, _ in order)
    return BlockTree(new_blocks, new_parent, new_children, cut, 0, root_vertex)


def _orient(graph, raw_block, anchor):
    verts, ids = raw_block
    if len(ids) == 1:
        u, v, _ = graph.edges[ids[0]]
        other = v if u == anchor else u
        return Block("edge", (anchor, other), (ids[0],))
    nbr = {v: [] for v in verts}
    for e in ids:
        u, v, _ = graph.edges[e]
        nbr[u].append((v, e))
        nbr[v].append((u, e))
    order, edges = [anchor], []
    prev, cur = None, anchor
    start = min(nbr[anchor])
    nxt, e = start
    while True:
        edges.append(e)
        if nxt == anchor:
            break
        order.append(nxt)
        prev, cur = cur, nxt
        nxt, e = next((w, f) for w, f in nbr[cur] if w != prev)
    return Block("cycle", tuple(order), tuple(edges))


# -- partial solutions -------------------------------------------------------


@dataclass(frozen=True)
class SideTree:
    """Tree hanging from an attachment vertex through an edge of color ``first_color``.

    ``ecc`` is the eccentricity of the attachment vertex.  The trivial side
    tree has no edges and ``first_color`` None.
    """

    edges: frozenset
    ecc: int
    first_color: Optional[int]

    @property
    def trivial(self) -> bool:
        return not self.edges


TRIVIAL = SideTree(frozenset(), 0, None)


@dataclass
class CycleTable:
    """Ladders of side trees for a cycle block (``None`` marks an infeasible side)."""

    left: list  # index 0..m-1
    right: list  # index 1..m, slot 0 unused
    feasible: list  # per cycle position p: lambda(edges[p]) exists


@dataclass(frozen=True)
class PartialSolution:
    """``lambda_B(e)``: tree edges and anchor eccentricity on each side of ``e``."""

    edges: frozenset
    eccentricities: tuple


@dataclass(frozen=True)
class Member:
    """A side tree offered as a 2-SAT variable."""

    child: int
    direction: str  # "L" or "R"
    index: int
    attach: int
    arc: int
    tree: Optional[SideTree]


@dataclass
class Phi:
    """The three clause families over the members allowed by the current bounds."""

    variables: list  # Member per variable id
    phi0: list = field(default_factory=list)
    phi1: list = field(default_factory=list)
    phi2: list = field(default_factory=list)
    contradiction: bool = False

    def formula(self) -> TwoSatFormula:
        return TwoSatFormula(len(self.variables), tuple(self.phi0 + self.phi1 + self.phi2))


class _Region:
    """The fixed tree ``T^e`` over one or two arcs from the anchor plus its candidate members."""

    def __init__(self, solver: "CactusSolver", arcs):
        self.solver = solver
        graph, cost, k = solver.graph, solver.cost, solver.k
        self.arcs = arcs
        self.anchor = arcs[0][0]
        te = set()
        side_vertices = []
        attach_arc = {}
        self.broken = False
        for s, arc in enumerate(arcs):
            verts = {self.anchor}
            for a, b in zip(arc, arc[1:]):
                te.add(graph.edge_id(a, b))
                verts.add(b)
            for v in arc[1:]:
                attach_arc[v] = s
                for c in solver.attached(v):
                    if solver.blocks.blocks[c].kind == "edge":
                        tree = solver.tables[c]
                        if tree is None:
                            self.broken = True
                            continue
                        te |= tree.edges
                        verts |= {x for e in tree.edges for x in graph.edges[e][:2]}
            side_vertices.append(verts)
        self.te = frozenset(te)
        if self.broken:
            return
        adj = {}
        for e in self.te:
            u, v, c = graph.edges[e]
            adj.setdefault(u, []).append((v, c))
            adj.setdefault(v, []).append((u, c))
        self.adj = adj
        self.te_diam = edge_set_diameter(graph, solver.costs, self.te)
        # distances from the anchor with the color of the edge entering each vertex
        self.from_anchor = self._bfs(self.anchor)
        self.te_ecc = [max((self.from_anchor[z][0] for z in verts if z in self.from_anchor), default=0)
                       for verts in side_vertices]

        members = []
        for v in sorted(attach_arc):
            for c in solver.attached(v):
                block = solver.blocks.blocks[c]
                if block.kind != "cycle":
                    continue
                table = solver.tables[c]
                m = len(block.vertices)
                for i in range(m):
                    members.append(Member(c, "L", i, v, attach_arc[v], table.left[i]))
                for j in range(1, m + 1):
                    members.append(Member(c, "R", j, v, attach_arc[v], table.right[j]))
        self.members = members
        self.sources = {}
        for mem in members:
            if mem.attach not in self.sources:
                self.sources[mem.attach] = self._bfs(mem.attach)

        # per-member diameter and anchor eccentricity of T^e plus that member
        self.with_diam = []
        self.with_ecc = []
        for mem in members:
            t = mem.tree
            if t is None or t.trivial:
                self.with_diam.append(self.te_diam)
                self.with_ecc.append(self.te_ecc[mem.arc])
                continue
            d, _, last = self.from_anchor[mem.attach]
            into = t.ecc if mem.attach == self.anchor else d + cost[last][t.first_color] + t.ecc
            self.with_ecc.append(max(self.te_ecc[mem.arc], into))
            self.with_diam.append(max(self.te_diam, self._reach(mem.attach, t.first_color) + t.ecc))

        # pairs whose joint union exceeds k, computed once for every bound
        self.conflicts = []
        for x in range(len(members)):
            mx = members[x]
            if mx.tree is None or mx.tree.trivial:
                continue
            for y in range(x + 1, len(members)):
                my = members[y]
                if my.tree is None or my.tree.trivial:
                    continue
                if mx.child == my.child:
                    if mx.direction == my.direction:
                        continue
                    left, right = (mx, my) if mx.direction == "L" else (my, mx)
                    if right.index <= left.index:
                        continue
                joint = max(self.with_diam[x], self.with_diam[y], self._cross(mx, my))
                if joint > k:
                    self.conflicts.append((x, y))

    def _bfs(self, source):
        """``z -> (cost, first color out of source, color entering z)``."""
        cost = self.solver.cost
        out = {source: (0, None, None)}
        stack = [(w, source, c, c, 0) for w, c in self.adj.get(source, ())]
        while stack:
            x, prev, first, c_in, d = stack.pop()
            out[x] = (d, first, c_in)
            for y, c in self.adj[x]:
                if y != prev:
                    stack.append((y, x, first, c, d + cost[c_in][c]))
        return out

    def _reach(self, v, color):
        cost = self.solver.cost
        table = self.sources[v] if v in self.sources else self._bfs(v)
        best = 0
        for z, (d, first, _) in table.items():
            if z != v:
                best = max(best, d + cost[first][color])
        return best

    def _cross(self, m1, m2):
        cost = self.solver.cost
        t1, t2 = m1.tree, m2.tree
        if m1.attach == m2.attach:
            return t1.ecc + cost[t1.first_color][t2.first_color] + t2.ecc
        d, first, last = self.sources[m1.attach][m2.attach]
        return t1.ecc + cost[t1.first_color][first] + d + cost[last][t2.first_color] + t2.ecc

    def base_ok(self, bounds) -> bool:
        if self.broken or self.te_diam > self.solver.k:
            return False
        return all(e <= b for e, b in zip(self.te_ecc, bounds))

    def build_phi(self, bounds) -> Phi:
        k = self.solver.k
        allowed = []
        for x, mem in enumerate(self.members):
            ok = (
                mem.tree is not None
                and self.with_diam[x] <= k
                and self.with_ecc[x] <= bounds[mem.arc]
            )
            allowed.append(ok)
        var_of = {}
        variables = []
        for x, mem in enumerate(self.members):
            if allowed[x]:
                var_of[x] = len(variables)
                variables.append(mem)
        phi = Phi(variables)
        index = {(mem.child, mem.direction, mem.index): x for x, mem in enumerate(self.members)}

        def lit(key, positive=True):
            x = index[key]
            return (var_of[x], positive) if x in var_of else None

        children = sorted({mem.child for mem in self.members})
        for c in children:
            m = len(self.solver.blocks.blocks[c].vertices)
            # ladders: L_i -> L_{i-1}, R_j -> R_{j+1}
            for i in range(1, m):
                self._implication(phi, lit((c, "L", i)), lit((c, "L", i - 1)))
            for j in range(1, m):
                self._implication(phi, lit((c, "R", j)), lit((c, "R", j + 1)))
            # each non-anchor cycle vertex is covered from exactly one side
            for i in range(1, m):
                a, b = lit((c, "L", i)), lit((c, "R", i))
                if a is None and b is None:
                    phi.contradiction = True
                elif a is None:
                    phi.phi1.append((b, b))
                elif b is None:
                    phi.phi1.append((a, a))
                else:
                    phi.phi1.append((a, b))
                    phi.phi1.append(((a[0], False), (b[0], False)))
        for x, y in self.conflicts:
            if x in var_of and y in var_of:
                phi.phi2.append(((var_of[x], False), (var_of[y], False)))
        return phi

    @staticmethod
    def _implication(phi, premise, conclusion):
        if premise is None:
            return
        if conclusion is None:
            neg = (premise[0], False)
            phi.phi0.append((neg, neg))
        else:
            phi.phi0.append(((premise[0], False), conclusion))

    def solve(self, bounds):
        """Tree edges and per-arc anchor eccentricities, or None if no member set works."""
        if not self.base_ok(bounds):
            return None
        phi = self.build_phi(bounds)
        if phi.contradiction:
            return None
        assignment = solve_2sat(phi.formula())
        if assignment is None:
            return None
        chosen = {}
        for var, mem in enumerate(phi.variables):
            if not assignment[var]:
                continue
            best = chosen.setdefault((mem.child, mem.direction), mem)
            if mem.direction == "L" and mem.index > best.index:
                chosen[(mem.child, "L")] = mem
            if mem.direction == "R" and mem.index < best.index:
                chosen[(mem.child, "R")] = mem
        edges = set(self.te)
        eccs = list(self.te_ecc)
        for x, mem in enumerate(self.members):
            if chosen.get((mem.child, mem.direction)) is mem and not mem.tree.trivial:
                edges |= mem.tree.edges
                eccs[mem.arc] = max(eccs[mem.arc], self.with_ecc[x])
        return frozenset(edges), tuple(eccs)


def _smallest(lo, hi, test):
    """Smallest value in ``[lo, hi]`` passing the monotone ``test``; ``test(hi)`` must hold."""
    while lo < hi:
        mid = (lo + hi) // 2
        if test(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


class CactusSolver:
    """Decision procedure for one budget ``k`` on a connected cactus."""

    def __init__(self, instance: Instance, k: int, blocks: Optional[BlockTree] = None):
        self.instance = instance
        self.graph = instance.graph
        self.costs = instance.costs
        self.cost = instance.costs.cost
        self.k = k
        self.blocks = blocks if blocks is not None else compute_block_tree(self.graph)
        self.tables = {}
        self._attached = {}
        for b in range(len(self.blocks.blocks)):
            for v, cs in self.blocks.children_at(b).items():
                self._attached.setdefault(v, []).extend(cs)

    def attached(self, v):
        return self._attached.get(v, ())

    # arcs of a cycle block split by removing the edge at position p
    def _cycle_arcs(self, block: Block, p: int):
        verts = block.vertices
        m = len(verts)
        left = list(verts[: p + 1])
        right = [verts[0]] + list(reversed(verts[p + 1:]))
        if p == m - 1:
            return [right, left]
        return [left, right]

    def region(self, arcs) -> _Region:
        return _Region(self, arcs)

    def arcs_for(self, b: int, edge: int):
        block = self.blocks.blocks[b]
        if block.kind == "edge":
            return [list(block.vertices)]
        return self._cycle_arcs(block, block.edges.index(edge))

    def build_phi(self, b: int, edge: int, bounds) -> Phi:
        return self.region(self.arcs_for(b, edge)).build_phi(bounds)

    def compute_lambda(self, b: int, edge: int) -> Optional[PartialSolution]:
        """Minimize the first side's eccentricity with the second at ``k``, then the second."""
        region = self.region(self.arcs_for(b, edge))
        k = self.k
        if len(region.arcs) == 1:
            first = region.solve((k,))
            if first is None:
                return None
            i0 = _smallest(0, first[1][0], lambda i: region.solve((i,)) is not None)
            edges, eccs = region.solve((i0,))
            return PartialSolution(edges, eccs)
        first = region.solve((k, k))
        if first is None:
            return None
        if len(region.arcs[0]) == 1:
            i0 = 0
        else:
            i0 = _smallest(0, first[1][0], lambda i: region.solve((i, k)) is not None)
        at_i0 = region.solve((i0, k))
        if len(region.arcs[1]) == 1:
            j0 = 0
        else:
            j0 = _smallest(0, at_i0[1][1], lambda j: region.solve((i0, j)) is not None)
        edges, eccs = region.solve((i0, j0))
        return PartialSolution(edges, eccs)

    def _side(self, arc) -> Optional[SideTree]:
        region = self.region([arc])
        first = region.solve((self.k,))
        if first is None:
            return None
        i0 = _smallest(0, first[1][0], lambda i: region.solve((i,)) is not None)
        edges, eccs = region.solve((i0,))
        color = self.graph.color(self.graph.edge_id(arc[0], arc[1]))
        return SideTree(edges, eccs[0], color)

    def process_block(self, b: int) -> bool:
        """Fill the table of a non-root block; False when no choice inside it is feasible."""
        block = self.blocks.blocks[b]
        if block.kind == "edge":
            tree = self._side(list(block.vertices))
            self.tables[b] = tree
            return tree is not None
        verts = block.vertices
        m = len(verts)
        left = [TRIVIAL] + [self._side(list(verts[: i + 1])) for i in range(1, m)]
        right = [None] * (m + 1)
        right[m] = TRIVIAL
        for j in range(1, m):
            right[j] = self._side([verts[0]] + list(reversed(verts[j:])))
        feasible = []
        for p in range(m):
            lt, rt = left[p], right[p + 1]
            if lt is None or rt is None:
                feasible.append(False)
            elif lt.trivial or rt.trivial:
                feasible.append(True)
            else:
                feasible.append(lt.ecc + self.cost[lt.first_color][rt.first_color] + rt.ecc <= self.k)
        self.tables[b] = CycleTable(left, right, feasible)
        return any(feasible)

    def prepare(self) -> bool:
        """Fill the tables of every non-root block bottom-up; False if one is infeasible."""
        tree = self.blocks
        for b in tree.postorder():
            if b != tree.root_block and not self.process_block(b):
                return False
        return True

    def decide(self) -> Optional[SpanningForest]:
        """A spanning tree of diameter at most ``k``, or None."""
        tree = self.blocks
        if not tree.blocks:
            return SpanningForest(self.graph, ())
        if not self.prepare():
            return None
        root = tree.blocks[tree.root_block]
        for e in root.edges:
            sol = self.compute_lambda(tree.root_block, e)
            if sol is not None:
                witness = SpanningForest(self.graph, sol.edges)
                witness.require_tree()
                if edge_set_diameter(self.graph, self.costs, witness.edge_ids) > self.k:
                    raise AssertionError("cactus solver assembled a tree above the budget")
                return witness
        return None


def solve_cactus_decision(instance: Instance, k: Optional[int] = None) -> Optional[SpanningForest]:
    """Witness tree with reload diameter at most ``k`` (default: the instance budget), or None."""
    if k is None:
        k = instance.budget
    if k is None:
        raise ValueError("no budget given")
    return CactusSolver(instance, k).decide()


def solve_cactus(instance: Instance) -> OracleResult:
    """Minimum reload diameter on a connected cactus."""
    blocks = compute_block_tree(instance.graph)
    graph, costs = instance.graph, instance.costs

    def decide(k):
        return CactusSolver(instance, k, blocks).decide()

    def diameter(tree):
        return edge_set_diameter(graph, costs, tree.edge_ids)

    opt, witness, calls = search_budget(decide, upper_bound(instance), diameter)
    return OracleResult(opt, witness, calls)
