"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line; the lines are printed together at
the end of a pytest run (see conftest.py) and directly when this file is run
as a script.
"""

import random
import time
from functools import lru_cache

import networkx as nx

from helpers import (
    ACCEPTANCE,
    SMALL_UNSAT_BOUNDED,
    coloring_formula,
    exact_pair,
    packable,
    partitionable,
    planted_unsat_3cnf,
    random_forest,
    split_tree,
    truth_table_sat,
)
from reloadtree.cactus import solve_cactus, solve_cactus_decision
from reloadtree.decomposition import heuristic_decomposition
from reloadtree.errors import ResourceLimitError
from reloadtree.generators import (
    BinPackingInstance,
    CnfFormula,
    PartitionInstance,
    gen_degree3_from_3sat,
    gen_from_unary_binpacking,
    gen_outerplanar_from_3sat,
    gen_planar_from_partition,
    gen_random_3cnf,
    gen_random_bounded_3cnf,
    gen_random_cactus,
    gen_random_costs,
    gen_random_graph,
    has_three_occurrence_property,
    normalize_3sat_three_occurrences,
    random_instance,
)
from reloadtree.graph import Instance, ReloadCostTable, path_reload_cost, tree_diameter
from reloadtree.oracle import decide_bruteforce, solve_bruteforce
from reloadtree.twdp import build_nice_triple, fuse, reduce_forest, solve_fpt, solve_fpt_decision
from reloadtree.twosat import TwoSatFormula, solve_2sat


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return ok


# -- suite 1: random cacti ----------------------------------------------------------


def cactus_suite():
    cases = []
    for seed in range(200):
        rng = random.Random(seed)
        n = rng.randint(2, 12)
        colors = rng.randint(1, 5)
        g = gen_random_cactus(n, cycle_probability=rng.uniform(0.3, 0.9), seed=seed, num_colors=colors)
        cases.append(Instance(g, gen_random_costs(colors, 50, seed=seed)))
    return cases


@lru_cache(maxsize=None)
def run_cactus_suite():
    start = time.perf_counter()
    rows = []
    for inst in cactus_suite():
        brute = solve_bruteforce(inst)
        fast = solve_cactus(inst)
        ok_witness = tree_diameter(fast.witness, inst.costs) == fast.opt
        rows.append((inst, brute.opt, fast.opt, ok_witness))
    return rows, time.perf_counter() - start


def test_criterion_1_cactus_matches_enumeration():
    rows, elapsed = run_cactus_suite()
    bad = [i for i, (_, b, c, w) in enumerate(rows) if b != c or not w]
    ok = not bad and elapsed < 120
    assert report(1, ok, f"{len(rows) - len(bad)}/{len(rows)} cacti equal, {elapsed:.1f}s (limit 120s)"), bad


# -- suite 2: random graphs for the dynamic program ----------------------------------


def graph_suite():
    cases = []
    for seed in range(100):
        rng = random.Random(10_000 + seed)
        n = rng.randint(3, 10)
        g = gen_random_graph(n, extra_edges=rng.randint(1, n), max_degree=4, num_colors=rng.randint(1, 4), seed=seed)
        cases.append(random_instance(g, max_cost=20, seed=seed))
    return cases


@lru_cache(maxsize=None)
def run_graph_suite():
    start = time.perf_counter()
    rows = []
    tripped = 0
    largest = 0
    for inst in graph_suite():
        td = heuristic_decomposition(inst.graph)
        stats = {}
        brute = solve_bruteforce(inst)
        try:
            fpt = solve_fpt(inst, td, check_invariants=True, stats=stats)
        except ResourceLimitError:
            tripped += 1
            rows.append((inst, brute.opt, None, td.width))
            continue
        largest = max(largest, stats.get("max_table", 0))
        assert tree_diameter(fpt.witness, inst.costs) == fpt.opt
        rows.append((inst, brute.opt, fpt.opt, td.width))
    return rows, tripped, largest, time.perf_counter() - start


def test_criterion_2_dynamic_program_matches_enumeration():
    rows, tripped, largest, elapsed = run_graph_suite()
    bad = [i for i, (_, b, f, _) in enumerate(rows) if b != f]
    assert all(inst.graph.max_degree() <= 4 and inst.graph.n <= 10 for inst, *_ in rows)
    widths = sorted({w for *_, w in rows})
    ok = not bad and not tripped and elapsed < 600
    detail = (f"{len(rows) - len(bad)}/{len(rows)} graphs equal, widths {widths}, cap tripped {tripped}x, "
              f"largest table {largest}, {elapsed:.1f}s (limit 600s)")
    assert report(2, ok, detail), bad


# -- criterion 3: the two exact solvers agree on cacti ---------------------------------


def test_criterion_3_dynamic_program_matches_cactus_solver():
    rows, _ = run_cactus_suite()
    bad = []
    for i, (inst, _, cactus_opt, _) in enumerate(rows):
        if solve_fpt(inst).opt != cactus_opt:
            bad.append(i)
    assert report(3, not bad, f"{len(rows) - len(bad)}/{len(rows)} cacti agree"), bad


# -- criterion 4: 3-SAT on the outerplanar fan -----------------------------------------


def fan_formulas():
    rng = random.Random(4)
    out = []
    for i in range(50):
        num_vars = rng.randint(3, 6)
        if i % 4 == 3:
            out.append(planted_unsat_3cnf(num_vars, rng))
        else:
            out.append(gen_random_3cnf(num_vars, rng.randint(1, 8), seed=rng.randrange(10**6)))
    return out


def test_criterion_4_fan_reduction():
    shape = gen_outerplanar_from_3sat(CnfFormula(3, ((1, 2, 3),))).graph
    shape_ok = shape.n == 4 and shape.m == 5
    bad, counts, cross = [], {True: 0, False: 0}, 0
    for i, formula in enumerate(fan_formulas()):
        inst = gen_outerplanar_from_3sat(formula)
        sat = truth_table_sat(formula)
        counts[sat] += 1
        yes, witness, _ = decide_bruteforce(inst, 9)
        if yes != sat or (yes and tree_diameter(witness, inst.costs) > 9):
            bad.append(i)
        if len(formula.clauses) <= 4:
            cross += 1
            if (solve_fpt_decision(inst, k=9) is not None) != sat:
                bad.append(i)
    ok = shape_ok and not bad
    detail = (f"{50 - len(set(bad))}/50 formulas ({counts[True]} sat, {counts[False]} unsat), "
              f"{cross} also checked by the dynamic program, single clause {shape.n}v/{shape.m}e")
    assert report(4, ok, detail), bad


# -- criterion 5: 3-SAT on the degree-3 graph ------------------------------------------


def degree3_formulas():
    out = []
    seed = 0
    while len(out) < 30 - len(SMALL_UNSAT_BOUNDED):
        rng = random.Random(seed)
        f = gen_random_bounded_3cnf(rng.randint(3, 5), seed=seed, pair_probability=rng.uniform(0.25, 0.9),
                                    both_signs=rng.random() < 0.7)
        seed += 1
        normalized = normalize_3sat_three_occurrences(f)
        if normalized.clauses:
            out.append((f, normalized))
    for f in SMALL_UNSAT_BOUNDED:
        out.append((f, normalize_3sat_three_occurrences(f)))
    return out


def test_criterion_5_degree3_reduction():
    bad, counts = [], {True: 0, False: 0}
    shape_ok = True
    for i, (original, formula) in enumerate(degree3_formulas()):
        assert original.num_vars <= 5 and has_three_occurrence_property(formula)
        inst = gen_degree3_from_3sat(formula)
        entries = {x for row in inst.costs.cost for x in row}
        shape_ok &= inst.graph.max_degree() <= 3 and inst.costs.num_colors == 9 and entries <= {0, 1}
        sat = truth_table_sat(formula)
        if sat != truth_table_sat(original):
            bad.append(i)
        counts[sat] += 1
        yes, witness, _ = decide_bruteforce(inst, 0)
        if yes != sat or (yes and tree_diameter(witness, inst.costs) != 0):
            bad.append(i)
    drawn = gen_degree3_from_3sat(coloring_formula())
    drawn_ok = decide_bruteforce(drawn, 0)[0]
    ok = shape_ok and drawn_ok and not bad
    detail = (f"{30 - len(set(bad))}/30 formulas ({counts[True]} sat, {counts[False]} unsat), "
              f"max degree <= 3, 9 colors, costs in {{0,1}}: {shape_ok}, five-clause example yes at 0: {drawn_ok}")
    assert report(5, ok, detail), bad


# -- criterion 6: Partition -----------------------------------------------------------


def partition_multisets():
    rng = random.Random(6)
    out = []
    while len(out) < 30:
        n = rng.randint(1, 6)
        values = [rng.randint(1, 8) for _ in range(n)]
        # odd sums are trivially No; even most of them out so both answers show up
        if sum(values) % 2 and rng.random() < 0.7:
            values[-1] += 1
        if sum(values) <= 24:
            out.append(values)
    return out


def test_criterion_6_partition_reduction():
    bad, counts = [], {True: 0, False: 0}
    shape_ok = True
    start = time.perf_counter()
    for i, values in enumerate(partition_multisets()):
        inst = gen_planar_from_partition(PartitionInstance(values))
        width = heuristic_decomposition(inst.graph).width
        shape_ok &= inst.graph.max_degree() <= 3 and width <= 4
        expected = partitionable(values)
        counts[expected] += 1
        witness = solve_fpt_decision(inst, k=sum(values))
        if (witness is not None) != expected:
            bad.append(i)
    elapsed = time.perf_counter() - start
    ok = shape_ok and not bad
    detail = (f"{30 - len(bad)}/30 multisets ({counts[True]} yes, {counts[False]} no), "
              f"max degree <= 3 and width <= 4: {shape_ok}, {elapsed:.1f}s")
    assert report(6, ok, detail), bad


# -- criterion 7: unary bin packing ---------------------------------------------------


def packing_instances():
    rng = random.Random(7)
    out = []
    for _ in range(20):
        n = rng.randint(1, 5)
        bins = rng.choice((2, 3))
        sizes = [rng.randint(1, 3) for _ in range(n)]
        capacity = max(max(sizes), -(-sum(sizes) // bins)) + rng.choice((-1, 0, 0, 1))
        out.append(BinPackingInstance(tuple(sizes), max(capacity, 1), bins))
    return out


def test_criterion_7_bin_packing_reduction():
    bad, counts = [], {True: 0, False: 0}
    shape_ok = True
    start = time.perf_counter()
    for i, items in enumerate(packing_instances()):
        inst = gen_from_unary_binpacking(items)
        b = items.capacity
        shape_ok &= inst.graph.max_degree() == 2 * items.bins and inst.costs.max_entry() <= 2 * b + 1
        expected = packable(list(items.sizes), b, items.bins)
        counts[expected] += 1
        if (solve_fpt_decision(inst, k=2 * b) is not None) != expected:
            bad.append(i)
    elapsed = time.perf_counter() - start
    ok = shape_ok and not bad
    detail = (f"{20 - len(bad)}/20 instances ({counts[True]} packable, {counts[False]} not), "
              f"max degree == 2k and costs <= 2B+1: {shape_ok}, {elapsed:.1f}s")
    assert report(7, ok, detail), bad


# -- criterion 8: structural invariants ------------------------------------------------


def reduce_failures(rng, trials):
    failures = 0
    for _ in range(trials):
        n = rng.randint(1, 25)
        g, edges, terms = random_forest(rng, n)
        nodes, new_edges, phi = reduce_forest(range(n), edges, terms)
        again = reduce_forest(nodes, new_edges, terms)
        ok = again[0] == nodes and again[1] == new_edges
        for z in range(n):
            image = phi[z]
            cut = set(image) if isinstance(image, tuple) else {image}
            if image == z:
                continue
            comp = nx.node_connected_component(g.subgraph(set(range(n)) - cut), z)
            ok &= len(cut) <= 2 and cut <= nodes and not comp & terms
        failures += not ok
    return failures


def fuse_failures(rng, trials):
    failures = 0
    for _ in range(trials):
        n = rng.randint(2, 14)
        graph, cost, terms, (f1, f2) = split_tree(rng, n, rng.randint(1, 4))
        fused = fuse(exact_pair(graph, cost, terms, f1), exact_pair(graph, cost, terms, f2), graph, cost)
        union = nx.Graph()
        union.add_nodes_from(fused.nodes)
        union.add_edges_from(f1 + f2)
        costs = ReloadCostTable(len(cost), cost)
        ok = True
        for v in terms:
            for y, path in nx.single_source_shortest_path(union, v).items():
                ok &= fused.alpha.get((v, y)) == path_reload_cost(graph, costs, path)
        failures += not ok
    return failures


def twosat_failures(rng, trials):
    failures = 0
    for _ in range(trials):
        n = rng.randint(1, 12)
        clauses = tuple(tuple((rng.randrange(n), rng.random() < 0.5) for _ in range(2))
                        for _ in range(rng.randint(0, 3 * n)))
        f = TwoSatFormula(n, clauses)
        model = solve_2sat(f)
        cnf = CnfFormula(n, tuple(tuple(v + 1 if pos else -(v + 1) for v, pos in c) for c in clauses))
        ok = (model is not None) == truth_table_sat(cnf) and (model is None or f.evaluate(model))
        failures += not ok
    return failures


def test_criterion_8_structural_invariants():
    rows, tripped, _, _ = run_graph_suite()
    pairs_ok = len(rows) == 100 and not tripped
    rng = random.Random(8)
    reduce_bad = reduce_failures(rng, 500)
    fuse_bad = fuse_failures(rng, 500)
    sat_bad = twosat_failures(rng, 500)
    ok = pairs_ok and not reduce_bad and not fuse_bad and not sat_bad
    detail = (f"pair conditions checked on every insertion of suite 2: {pairs_ok}; failures: "
              f"reduce {reduce_bad}/500, fuse {fuse_bad}/500, 2-SAT {sat_bad}/500")
    assert report(8, ok, detail)


# -- criterion 9: monotonicity in k ---------------------------------------------------


def test_criterion_9_monotone_in_k():
    bad = []
    sweeps = 0
    for seed in range(50):
        rng = random.Random(900 + seed)
        colors = rng.randint(2, 4)
        g = gen_random_cactus(rng.randint(3, 9), cycle_probability=0.6, seed=seed, num_colors=colors)
        inst = Instance(g, gen_random_costs(colors, 8, seed=seed))
        nice = build_nice_triple(g, heuristic_decomposition(g))
        top = solve_cactus(inst).opt + 2
        cactus = [solve_cactus_decision(inst, k) is not None for k in range(top + 1)]
        dynamic = [solve_fpt_decision(inst, k=k, nice=nice) is not None for k in range(top + 1)]
        sweeps += 2 * (top + 1)
        if cactus != sorted(cactus) or dynamic != sorted(dynamic) or cactus != dynamic:
            bad.append(seed)
    assert report(9, not bad, f"{50 - len(bad)}/50 instances monotone for both solvers ({sweeps} decisions)"), bad


if __name__ == "__main__":
    tests = [
        test_criterion_1_cactus_matches_enumeration,
        test_criterion_2_dynamic_program_matches_enumeration,
        test_criterion_3_dynamic_program_matches_cactus_solver,
        test_criterion_4_fan_reduction,
        test_criterion_5_degree3_reduction,
        test_criterion_6_partition_reduction,
        test_criterion_7_bin_packing_reduction,
        test_criterion_8_structural_invariants,
        test_criterion_9_monotone_in_k,
    ]
    for test in tests:
        try:
            test()
        except AssertionError:
            pass
