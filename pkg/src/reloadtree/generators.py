"""Instance generators: hardness gadgets with known answers, and random inputs.

The four gadget constructions turn a source problem (3-SAT, Partition,
Unary Bin Packing) into a Diameter-Tree instance whose answer at the stated
budget equals the source answer.  Colors are dense ids; where each edge has
its own color, the color id is the edge's creation index.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .errors import ReductionError
from .graph import ColoredGraph, Instance, ReloadCostTable


@dataclass(frozen=True)
class CnfFormula:
    """CNF over variables ``1..num_vars``; literals are signed ints."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        for c in clauses:
            if not c:
                raise ReductionError("empty clause")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ReductionError(f"literal {lit} outside variables 1..{self.num_vars}")
        object.__setattr__(self, "clauses", clauses)

    def occurrences(self):
        """Map variable -> list of (clause index, position, literal)."""
        occ = {v: [] for v in range(1, self.num_vars + 1)}
        for j, clause in enumerate(self.clauses):
            for pos, lit in enumerate(clause):
                occ[abs(lit)].append((j, pos, lit))
        return occ

    def is_satisfied_by(self, assignment) -> bool:
        """``assignment[v]`` is the value of variable ``v`` (index 0 unused)."""
        return all(any(assignment[abs(l)] == (l > 0) for l in c) for c in self.clauses)


@dataclass(frozen=True)
class PartitionInstance:
    values: tuple

    def __post_init__(self):
        values = tuple(int(a) for a in self.values)
        if not values or any(a < 1 for a in values):
            raise ReductionError("partition items must be positive and non-empty")
        object.__setattr__(self, "values", values)

    @property
    def total(self) -> int:
        return sum(self.values)


@dataclass(frozen=True)
class BinPackingInstance:
    sizes: tuple
    capacity: int
    bins: int

    def __post_init__(self):
        sizes = tuple(int(a) for a in self.sizes)
        if not sizes or any(a < 1 for a in sizes):
            raise ReductionError("item sizes must be positive and non-empty")
        if self.bins < 2:
            raise ReductionError(f"need at least 2 bins, got {self.bins}")
        if self.capacity < 0:
            raise ReductionError("capacity must be non-negative")
        object.__setattr__(self, "sizes", sizes)


class _Builder:
    """Accumulates vertices and edges; one fresh color per edge unless given."""

    def __init__(self):
        self.n = 0
        self.edges = []
        self.names = {}

    def vertex(self, name):
        self.names[name] = self.n
        self.n += 1
        return self.n - 1

    def edge(self, a, b, color=None):
        if color is None:
            color = len(self.edges)
        self.edges.append((self.names[a], self.names[b], color))
        return len(self.edges) - 1

    def graph(self):
        return ColoredGraph(self.n, tuple(self.edges))


# -- 3-SAT on an outerplanar fan ---------------------------------------------


def gen_outerplanar_from_3sat(formula: CnfFormula) -> Instance:
    """One hub vertex plus a 3-vertex fan per clause; budget 9.

    Two hub edges reload at cost 10 when their literals are complementary and
    5 otherwise; every other reload costs 1.
    """
    for j, clause in enumerate(formula.clauses):
        if len(clause) != 3:
            raise ReductionError(f"clause {j + 1} has {len(clause)} literals, expected 3", clause=j)
        if any(-l in clause for l in clause):
            raise ReductionError(f"clause {j + 1} contains a literal and its negation", clause=j)
    b = _Builder()
    b.vertex("r")
    hub_literal = {}
    for j, clause in enumerate(formula.clauses):
        for pos in range(3):
            b.vertex((j, pos))
        for pos in range(3):
            hub_literal[b.edge("r", (j, pos))] = clause[pos]
        b.edge((j, 0), (j, 1))
        b.edge((j, 1), (j, 2))
    m = len(b.edges)
    pairs = {}
    for e1, l1 in hub_literal.items():
        for e2, l2 in hub_literal.items():
            if e1 < e2:
                pairs[(e1, e2)] = 10 if l1 == -l2 else 5
    costs = ReloadCostTable.from_pairs(m, pairs, default=1)
    return Instance(b.graph(), costs, 9)


# -- 3-SAT with three occurrences on a degree-3 graph --------------------------


def normalize_3sat_three_occurrences(formula: CnfFormula) -> CnfFormula:
    """Rewrite so every variable occurs exactly three times with both polarities.

    Variables used with one polarity only are dropped together with their
    clauses (they can be set to satisfy them).  A variable with exactly two
    occurrences ``x`` gets a fresh ``y`` and the clauses ``(x or y)`` and
    ``(y or not y)``.  Variables are renumbered densely from 1 in order of
    first appearance.
    """
    for j, clause in enumerate(formula.clauses):
        if not 2 <= len(clause) <= 3:
            raise ReductionError(f"clause {j + 1} has {len(clause)} literals, expected 2 or 3", clause=j)
    for var, occ in formula.occurrences().items():
        if len(occ) > 3:
            raise ReductionError(f"variable {var} occurs {len(occ)} times (at most 3 allowed)", variable=var)
    clauses = [tuple(c) for c in formula.clauses]
    # drop one-sided variables until none remain
    while True:
        signs = {}
        for c in clauses:
            for lit in c:
                signs.setdefault(abs(lit), set()).add(lit > 0)
        pure = {v for v, s in signs.items() if len(s) == 1}
        if not pure:
            break
        clauses = [c for c in clauses if not any(abs(l) in pure for l in c)]
    count = {}
    for c in clauses:
        for lit in c:
            count[abs(lit)] = count.get(abs(lit), 0) + 1
    next_var = formula.num_vars + 1
    for var in sorted(count):
        if count[var] == 2:
            y = next_var
            next_var += 1
            clauses.append((var, y))
            clauses.append((y, -y))
    rename = {}
    for c in clauses:
        for lit in c:
            rename.setdefault(abs(lit), len(rename) + 1)
    renamed = tuple(tuple(rename[abs(l)] * (1 if l > 0 else -1) for l in c) for c in clauses)
    return CnfFormula(len(rename), renamed)


def has_three_occurrence_property(formula: CnfFormula) -> bool:
    for occ in formula.occurrences().values():
        if len(occ) != 3:
            return False
        if len({lit > 0 for _, _, lit in occ}) != 2:
            return False
    return True


# colors of the degree-3 construction, shifted to 0-based ids
_PR, _RN, _UV = 0, 1, 2
_POSITIVE = (3, 4, 5)
_NEGATIVE = (6, 7, 8)


def gen_degree3_from_3sat(formula: CnfFormula) -> Instance:
    """Variable gadgets on a spine of ``u`` vertices, one vertex per clause; budget 0."""
    occ = formula.occurrences()
    for var, items in occ.items():
        if len(items) != 3:
            raise ReductionError(f"variable {var} occurs {len(items)} times, expected exactly 3", variable=var)
        if len({lit > 0 for _, _, lit in items}) != 2:
            raise ReductionError(f"variable {var} does not occur with both polarities", variable=var)
    b = _Builder()
    for i in range(1, formula.num_vars + 1):
        for name in "uvprn":
            b.vertex((name, i))
    for j in range(len(formula.clauses)):
        b.vertex(("c", j))
    for i in range(1, formula.num_vars + 1):
        b.edge(("u", i), ("v", i), _UV)
        b.edge(("v", i), ("p", i), _UV)
        b.edge(("p", i), ("r", i), _PR)
        b.edge(("r", i), ("n", i), _RN)
        b.edge(("n", i), ("v", i), _UV)
    for i in range(1, formula.num_vars):
        b.edge(("u", i), ("u", i + 1), _UV)
    used = {j: set() for j in range(len(formula.clauses))}

    def clause_edge(gadget, j, positive):
        palette = _POSITIVE if positive else _NEGATIVE
        color = next(c for c in palette if c not in used[j])
        used[j].add(color)
        b.edge(gadget, ("c", j), color)

    for i in range(1, formula.num_vars + 1):
        items = occ[i]
        pos_item = next(it for it in items if it[2] > 0)
        neg_item = next(it for it in items if it[2] < 0)
        rest = next(it for it in items if it is not pos_item and it is not neg_item)
        clause_edge(("p", i), pos_item[0], True)
        clause_edge(("n", i), neg_item[0], False)
        clause_edge(("r", i), rest[0], rest[2] > 0)
    pairs = {(_PR, _RN): 1}
    for c in _POSITIVE:
        pairs[(_PR, c)] = 1
    for c in _NEGATIVE:
        pairs[(_RN, c)] = 1
    clause_colors = _POSITIVE + _NEGATIVE
    for a in clause_colors:
        for c in clause_colors:
            if a < c:
                pairs[(a, c)] = 1
    costs = ReloadCostTable.from_pairs(9, pairs, default=0)
    return Instance(b.graph(), costs, 0)


# -- Partition on a planar ladder ----------------------------------------------


def gen_planar_from_partition(instance: PartitionInstance) -> Instance:
    """Two mirrored ladders of six-vertex gadgets joined at their roots; budget ``sum(a)``.

    Reloads are free on the connectors between gadgets, on both root edges of
    each copy and on the bridge between the roots.  Entering the middle rung
    ``{m_i, m_i'}`` from ``u_i`` or ``d_i`` costs ``a_i`` and leaving it towards
    ``u_i'`` or ``d_i'`` is free.  Every other reload costs ``sum(a) + 1``.
    """
    values = instance.values
    total = instance.total
    n = len(values)
    b = _Builder()
    for copy in (0, 1):
        b.vertex(("r", copy))
    for copy in (0, 1):
        for i in range(n):
            for name in ("u", "u'", "m", "m'", "d", "d'"):
                b.vertex((name, copy, i))
    free_edges = []  # every reload involving these edges is free
    pairs = {}
    for copy in (0, 1):
        for i in range(n):
            def V(name):
                return (name, copy, i)

            b.edge(V("u"), V("u'"))
            rung = b.edge(V("m"), V("m'"))
            b.edge(V("d"), V("d'"))
            up_in = b.edge(V("u"), V("m"))
            up_out = b.edge(V("u'"), V("m'"))
            down_in = b.edge(V("m"), V("d"))
            down_out = b.edge(V("m'"), V("d'"))
            pairs[(up_in, rung)] = values[i]
            pairs[(down_in, rung)] = values[i]
            pairs[(rung, up_out)] = 0
            pairs[(rung, down_out)] = 0
        free_edges.append(b.edge(("r", copy), ("u", copy, 0)))
        free_edges.append(b.edge(("r", copy), ("d", copy, 0)))
        for i in range(n - 1):
            free_edges.append(b.edge(("u'", copy, i), ("u", copy, i + 1)))
            free_edges.append(b.edge(("d'", copy, i), ("d", copy, i + 1)))
    free_edges.append(b.edge(("r", 0), ("r", 1)))
    graph = b.graph()
    for e in free_edges:
        u, v, _ = graph.edges[e]
        for x in (u, v):
            for _, f in graph.neighbors(x):
                if f != e:
                    pairs[(e, f)] = 0
    costs = ReloadCostTable.from_pairs(graph.m, pairs, default=total + 1)
    return Instance(graph, costs, total)


# -- Unary Bin Packing ---------------------------------------------------------


def gen_from_unary_binpacking(instance: BinPackingInstance, rung_guard: bool = True) -> Instance:
    """Two copies of a ``k``-lane ladder sharing the root; budget ``2B``.

    At each item vertex ``v_i`` every reload costs ``2B+1`` except entering on
    ``{v_i, l_j}`` and leaving on ``{v_i, r_j}`` for the same lane ``j``, which
    costs the item size.  With ``rung_guard`` (the default) the reloads between
    an item edge and the rung ``{l_j, r_j}`` of the same row also cost
    ``2B+1``; without it an item vertex can hang as a leaf and the budget no
    longer reflects the packing.
    """
    sizes, cap, k = instance.sizes, instance.capacity, instance.bins
    n = len(sizes)
    big = 2 * cap + 1
    b = _Builder()
    b.vertex("root")
    for copy in (0, 1):
        for i in range(n):
            b.vertex(("v", copy, i))
            for j in range(k):
                b.vertex(("l", copy, i, j))
                b.vertex(("r", copy, i, j))
    pairs = {}
    for copy in (0, 1):
        for j in range(k):
            b.edge("root", ("l", copy, 0, j))
        for i in range(n):
            v = ("v", copy, i)
            left, right = [], []
            for j in range(k):
                le = b.edge(v, ("l", copy, i, j))
                re = b.edge(v, ("r", copy, i, j))
                rung = b.edge(("l", copy, i, j), ("r", copy, i, j))
                left.append(le)
                right.append(re)
                if rung_guard:
                    pairs[(le, rung)] = big
                    pairs[(re, rung)] = big
            at_v = left + right
            for x in at_v:
                for y in at_v:
                    if x < y:
                        pairs[(x, y)] = big
            for j in range(k):
                pairs[(left[j], right[j])] = sizes[i]
            if i + 1 < n:
                for j in range(k):
                    b.edge(("r", copy, i, j), ("l", copy, i + 1, j))
    graph = b.graph()
    costs = ReloadCostTable.from_pairs(graph.m, pairs, default=0)
    return Instance(graph, costs, 2 * cap)


# -- random inputs -----------------------------------------------------------


def gen_random_cactus(
    n: int, cycle_probability: float = 0.5, seed: int = 0, num_colors: int = 3, max_cycle: int = 6
) -> ColoredGraph:
    """Random connected cactus grown by attaching pendant edges and cycles."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    edges = []
    count = 1
    while count < n:
        anchor = rng.randrange(count)
        room = n - count
        if room >= 2 and rng.random() < cycle_probability:
            length = rng.randint(3, min(max_cycle, room + 1))
            cycle = [anchor] + list(range(count, count + length - 1))
            count += length - 1
            for a, c in zip(cycle, cycle[1:] + cycle[:1]):
                edges.append((a, c, rng.randrange(num_colors)))
        else:
            edges.append((anchor, count, rng.randrange(num_colors)))
            count += 1
    return ColoredGraph(n, tuple(edges))


def gen_random_costs(num_colors: int, max_cost: int, seed: int = 0, zero_diagonal: bool = True) -> ReloadCostTable:
    if max_cost < 0:
        raise ValueError("max_cost must be non-negative")
    rng = random.Random(seed)
    rows = [[0] * num_colors for _ in range(num_colors)]
    for a in range(num_colors):
        for c in range(a, num_colors):
            if a == c and zero_diagonal:
                continue
            rows[a][c] = rows[c][a] = rng.randint(0, max_cost)
    return ReloadCostTable(num_colors, tuple(tuple(r) for r in rows))


def gen_random_graph(
    n: int, extra_edges: int, max_degree: int = 4, num_colors: int = 3, seed: int = 0
) -> ColoredGraph:
    """Random connected graph: a degree-capped random tree plus up to ``extra_edges`` chords."""
    rng = random.Random(seed)
    degree = [0] * n
    edges = set()
    for v in range(1, n):
        choices = [u for u in range(v) if degree[u] < max_degree]
        u = rng.choice(choices) if choices else rng.randrange(v)
        edges.add((u, v))
        degree[u] += 1
        degree[v] += 1
    candidates = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    rng.shuffle(candidates)
    added = 0
    for u, v in candidates:
        if added >= extra_edges:
            break
        if degree[u] < max_degree and degree[v] < max_degree:
            edges.add((u, v))
            degree[u] += 1
            degree[v] += 1
            added += 1
    return ColoredGraph(n, tuple((u, v, rng.randrange(num_colors)) for u, v in sorted(edges)))


def gen_random_3cnf(num_vars: int, num_clauses: int, seed: int = 0) -> CnfFormula:
    """Clauses of three distinct variables with random signs."""
    if num_vars < 3:
        raise ValueError("need at least 3 variables")
    rng = random.Random(seed)
    clauses = []
    for _ in range(num_clauses):
        chosen = rng.sample(range(1, num_vars + 1), 3)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in chosen))
    return CnfFormula(num_vars, tuple(clauses))


def random_instance(graph: ColoredGraph, max_cost: int, seed: int = 0, budget: Optional[int] = None) -> Instance:
    colors = max(graph.num_colors_used(), 1)
    return Instance(graph, gen_random_costs(colors, max_cost, seed), budget)


def gen_random_bounded_3cnf(
    num_vars: int,
    seed: int = 0,
    max_occurrences: int = 3,
    pair_probability: float = 0.25,
    both_signs: bool = False,
) -> CnfFormula:
    """Clauses of 2 or 3 distinct variables, each variable used 2 to ``max_occurrences`` times.

    ``pair_probability`` is the chance of cutting a two-literal clause where a
    three-literal one would fit; pair-heavy formulas are more often unsatisfiable.
    With ``both_signs`` every variable occurs at least once with each sign.
    """
    if num_vars < 3:
        raise ValueError("need at least 3 variables")
    rng = random.Random(seed)
    while True:
        slots = []
        for v in range(1, num_vars + 1):
            signs = [rng.random() < 0.5 for _ in range(rng.randint(2, max_occurrences))]
            if both_signs:
                signs[:2] = [True, False]
            slots += [v if positive else -v for positive in signs]
        rng.shuffle(slots)
        sizes = []
        left = len(slots)
        while left:
            size = 2 if left in (2, 4) else 3
            if left > 4 and rng.random() < pair_probability:
                size = 2
            sizes.append(size)
            left -= size
        clauses, pos = [], 0
        for size in sizes:
            clauses.append(tuple(slots[pos:pos + size]))
            pos += size
        if all(len({abs(l) for l in c}) == len(c) for c in clauses):
            return CnfFormula(num_vars, tuple(clauses))
