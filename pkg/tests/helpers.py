"""Instance builders and source-problem oracles shared by the tests."""

from itertools import combinations, product

import networkx as nx

from reloadtree.generators import CnfFormula
from reloadtree.graph import ColoredGraph, Instance, ReloadCostTable, path_reload_cost
from reloadtree.twdp import TPair

# criterion number -> one PASS/FAIL line, printed at the end of the run
ACCEPTANCE = {}


def distinct_colors(n, pairs):
    """Graph on ``n`` vertices with one color per edge, in listing order."""
    return ColoredGraph(n, tuple((u, v, i) for i, (u, v) in enumerate(pairs)))


def uniform_costs(num_colors, value):
    return ReloadCostTable.from_pairs(num_colors, {}, default=value)


def triangle(value=1):
    graph = distinct_colors(3, [(0, 1), (1, 2), (0, 2)])
    return Instance(graph, uniform_costs(3, value))


def relabel(points, segments):
    """Turn a drawing given by coordinates into a graph on ``0..n-1``."""
    ids = {p: i for i, p in enumerate(sorted(points))}
    return distinct_colors(len(ids), [(ids[a], ids[b]) for a, b in segments])


def _cycle(*pts):
    return [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]


def drawn_cactus():
    """The 20-vertex cactus with five cycle blocks and three edge blocks."""
    segments = [((1, 0), (2, 0))]
    segments += _cycle((2, 0), (3, 0), (4, -0.5), (3, -1), (2, -1))
    segments += _cycle((4, -0.5), (4, 0.5), (5, 0.5), (5, -0.5))
    segments += _cycle((4, -0.5), (4, -1.5), (5, -1.5))
    segments += _cycle((2, -1), (1.5, -2), (2, -3), (3, -3), (3, -2))
    segments += [((1.5, -2), (1, -2))]
    segments += _cycle((1, -2), (0, -2), (0, -3), (1, -3))
    segments += [((2, -4), (2, -3))]
    points = {p for s in segments for p in s}
    return relabel(points, segments)


def three_triangles():
    """Triangle u, v, w with a further triangle hanging at v and one at w."""
    pairs = [(0, 1), (1, 2), (0, 2), (1, 3), (3, 4), (1, 4), (2, 5), (5, 6), (2, 6)]
    return distinct_colors(7, pairs)


def coloring_formula():
    """Five clauses on four variables, every variable used three times with both signs."""
    return CnfFormula(4, ((1, -2, 3), (-1, -4), (-3, -4), (-1, 2, 3), (2, 4)))


def truth_table_sat(formula):
    for bits in product((False, True), repeat=formula.num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in clause) for clause in formula.clauses):
            return True
    return False


def partitionable(values):
    total = sum(values)
    if total % 2:
        return False
    return any(
        sum(values[i] for i in chosen) * 2 == total
        for r in range(len(values) + 1)
        for chosen in combinations(range(len(values)), r)
    )


def packable(sizes, capacity, bins):
    """Exhaustive search over bin assignments, largest items first."""
    load = [0] * bins
    order = sorted(sizes, reverse=True)

    def place(i):
        if i == len(order):
            return True
        seen = set()
        for b in range(bins):
            if load[b] in seen or load[b] + order[i] > capacity:
                continue
            seen.add(load[b])
            load[b] += order[i]
            if place(i + 1):
                return True
            load[b] -= order[i]
        return False

    return place(0)


# -- forests for the compressed-forest tests --------------------------------------


def random_forest(rng, n):
    """Random forest on ``0..n-1`` and a set with at least one vertex per component."""
    edges = []
    for v in range(1, n):
        if rng.random() < 0.85:
            u = rng.randrange(v)
            edges.append((u, v))
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    terms = set()
    for comp in nx.connected_components(g):
        terms.add(rng.choice(sorted(comp)))
    for v in range(n):
        if rng.random() < 0.1:
            terms.add(v)
    return g, edges, terms


def exact_pair(graph, cost, terms, edges):
    """Unreduced pair: every vertex of ``edges`` kept, costs read off the forest itself."""
    costs = ReloadCostTable(len(cost), cost)
    nodes = set(terms) | {x for e in edges for x in e}
    f = nx.Graph()
    f.add_nodes_from(nodes)
    f.add_edges_from(edges)
    alpha = {}
    for x in terms:
        reach = nx.single_source_shortest_path(f, x)
        for y, path in reach.items():
            alpha[(x, y)] = path_reload_cost(graph, costs, path)
        for a, b in edges:
            if a in terms or b in terms or a not in reach:
                continue
            alpha[(x, (min(a, b), max(a, b)))] = min(alpha[(x, a)], alpha[(x, b)])
    return TPair(terms, nodes, {(min(a, b), max(a, b)) for a, b in edges}, alpha)


def split_tree(rng, n, num_colors):
    """A random colored tree, a terminal set, and its edges split into two forests that meet only at terminals."""
    parents = [rng.randrange(v) for v in range(1, n)]
    graph = ColoredGraph(n, tuple((p, v + 1, rng.randrange(num_colors)) for v, p in enumerate(parents)))
    rows = [[0] * num_colors for _ in range(num_colors)]
    for a in range(num_colors):
        for b in range(a + 1, num_colors):
            rows[a][b] = rows[b][a] = rng.randint(0, 9)
    cost = tuple(tuple(r) for r in rows)
    terms = {v for v in range(n) if rng.random() < 0.4} or {0}
    tree = graph.to_networkx()
    pieces = nx.Graph(tree.subgraph(set(range(n)) - terms))
    side_of = {}
    for comp in nx.connected_components(pieces):
        s = rng.randrange(2)
        for v in comp:
            side_of[v] = s
    forests = ([], [])
    for u, v, _ in graph.edges:
        if u in terms and v in terms:
            s = rng.randrange(2)
        else:
            s = side_of[v if u in terms else u]
        forests[s].append((u, v))
    return graph, cost, terms, forests


# -- formulas with a known answer ---------------------------------------------------


def planted_unsat_3cnf(num_vars, rng):
    """Eight 3-clauses that refute every branch of a random depth-3 decision tree.

    Each clause forbids the assignment on one root-to-leaf path, and the eight
    paths cover all assignments, so the formula is unsatisfiable.
    """
    clauses = []

    def grow(path):
        if len(path) == 3:
            clauses.append(tuple(-lit for lit in path))
            return
        used = {abs(lit) for lit in path}
        var = rng.choice([v for v in range(1, num_vars + 1) if v not in used])
        grow(path + [var])
        grow(path + [-var])

    grow([])
    rng.shuffle(clauses)
    clauses = [tuple(rng.sample(c, 3)) for c in clauses]
    return CnfFormula(num_vars, tuple(clauses))


# unsatisfiable, at most three occurrences per variable, found by random search and truth tables
SMALL_UNSAT_BOUNDED = (
    CnfFormula(5, ((1, 2), (3, -4), (4, -5), (4, 5), (1, -2), (-2, 3), (-1, -3))),
    CnfFormula(5, ((4, 5), (2, -5), (1, -4), (-2, -3), (-1, -4), (3, -5))),
    CnfFormula(4, ((-2, -3), (-2, 3), (-1, 3), (1, -4), (2, 4), (-1, -4))),
    CnfFormula(4, ((-3, -4), (1, 2), (-1, 3), (-3, 4), (1, -2))),
    CnfFormula(5, ((-4, -5), (1, 3), (-1, 3), (-3, 4), (2, 5), (-2, 5))),
    CnfFormula(5, ((4, 5), (-1, 2), (1, -3, 5), (4, -5), (-2, 3), (-2, -3), (1, -4))),
)
