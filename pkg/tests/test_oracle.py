import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from helpers import distinct_colors, triangle, uniform_costs
from reloadtree.errors import BudgetExceededError, DisconnectedGraphError
from reloadtree.generators import (
    PartitionInstance,
    gen_planar_from_partition,
    gen_random_graph,
    random_instance,
)
from reloadtree.graph import ColoredGraph, Instance, SpanningForest, tree_diameter
from reloadtree.oracle import decide_bruteforce, enumerate_spanning_trees, kirchhoff_count, solve_bruteforce


def complete_graph(n):
    return distinct_colors(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def test_complete_graph_on_four_vertices():
    g = complete_graph(4)
    trees = list(enumerate_spanning_trees(g))
    assert len(trees) == 16 == kirchhoff_count(g)
    assert len(set(trees)) == 16
    assert all(t.is_spanning_tree() for t in trees)


def test_tree_has_only_itself():
    g = distinct_colors(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
    trees = list(enumerate_spanning_trees(g))
    assert [t.edge_ids for t in trees] == [frozenset(range(4))]


@pytest.mark.parametrize("n", [3, 4, 7])
def test_cycle_has_one_tree_per_edge(n):
    g = distinct_colors(n, [(i, (i + 1) % n) for i in range(n)])
    assert len(list(enumerate_spanning_trees(g))) == n


def test_disconnected_graph_has_no_spanning_tree():
    g = distinct_colors(4, [(0, 1), (2, 3)])
    with pytest.raises(DisconnectedGraphError):
        list(enumerate_spanning_trees(g))
    assert solve_bruteforce(Instance(g, uniform_costs(2, 0))).opt is None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_enumeration_count_matches_the_determinant(seed):
    g = gen_random_graph(7, extra_edges=5, max_degree=5, num_colors=2, seed=seed)
    trees = list(enumerate_spanning_trees(g))
    assert len(trees) == len(set(trees)) == kirchhoff_count(g)
    assert len(trees) == round(nx.number_of_spanning_trees(g.to_networkx()))


def test_all_ones_triangle():
    res = solve_bruteforce(triangle(1))
    assert res.opt == 1
    assert res.trees_enumerated == 3


def test_tree_optimum_is_its_own_diameter():
    g = distinct_colors(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
    inst = random_instance(g, max_cost=9, seed=3)
    assert solve_bruteforce(inst).opt == tree_diameter(SpanningForest(g, range(4)), inst.costs)


def test_budget_is_checked_before_enumerating():
    with pytest.raises(BudgetExceededError):
        solve_bruteforce(Instance(complete_graph(6), uniform_costs(15, 1)), max_trees=100)


def test_two_ones_partition_instance_has_optimum_two():
    # 11.56M spanning trees, so the exact value comes from the branch and bound decider
    inst = gen_planar_from_partition(PartitionInstance((1, 1)))
    assert kirchhoff_count(inst.graph) == 11_560_000
    yes, witness, _ = decide_bruteforce(inst, 2)
    assert yes and tree_diameter(witness, inst.costs) <= 2
    assert not decide_bruteforce(inst, 1)[0]


def test_single_vertex_decides_yes():
    inst = Instance(ColoredGraph(1), uniform_costs(1, 0))
    assert decide_bruteforce(inst, 0)[0]


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_decider_agrees_with_enumeration(seed):
    g = gen_random_graph(7, extra_edges=4, max_degree=4, num_colors=3, seed=seed)
    inst = random_instance(g, max_cost=6, seed=seed)
    opt = solve_bruteforce(inst).opt
    for k in (opt - 1, opt):
        if k < 0:
            continue
        yes, witness, _ = decide_bruteforce(inst, k)
        assert yes == (k >= opt)
        if yes:
            assert tree_diameter(witness, inst.costs) <= k
