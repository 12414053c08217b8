"""Pick a solver by graph class and run it in optimization or decision mode."""

from __future__ import annotations

from typing import Optional

from .cactus import compute_block_tree, solve_cactus, solve_cactus_decision
from .errors import DisconnectedGraphError, NotACactusError
from .graph import Instance, SpanningForest, edge_set_diameter
from .oracle import DEFAULT_MAX_TREES, OracleResult, solve_bruteforce
from .twdp import solve_fpt, solve_fpt_decision

ALGORITHMS = ("auto", "brute", "cactus", "twdp")


def is_cactus(graph) -> bool:
    try:
        compute_block_tree(graph)
    except NotACactusError:
        return False
    return True


def classify(graph) -> str:
    """One of ``disconnected``, ``tree``, ``path-or-cycle``, ``cactus`` or ``general``."""
    if not graph.is_connected():
        return "disconnected"
    if graph.m == graph.n - 1:
        return "tree"
    if graph.max_degree() <= 2:
        return "path-or-cycle"
    if is_cactus(graph):
        return "cactus"
    return "general"


def solve_low_degree(instance: Instance) -> OracleResult:
    """Trees are their own answer; a cycle has one spanning tree per removed edge."""
    graph, costs = instance.graph, instance.costs
    if graph.m == graph.n - 1:
        tree = SpanningForest(graph, range(graph.m))
        return OracleResult(edge_set_diameter(graph, costs, tree.edge_ids), tree, 1)
    best = None
    for drop in range(graph.m):
        tree = SpanningForest(graph, [e for e in range(graph.m) if e != drop])
        d = edge_set_diameter(graph, costs, tree.edge_ids)
        if best is None or d < best.opt:
            best = OracleResult(d, tree, graph.m)
    return best


def pick_algorithm(graph_class: str) -> str:
    """Trees answer themselves, paths and cycles are cacti, everything else goes to the DP."""
    return {"tree": "tree", "path-or-cycle": "cactus", "cactus": "cactus"}.get(graph_class, "twdp")


def run_solver(
    instance: Instance,
    algo: str = "auto",
    k: Optional[int] = None,
    td=None,
    max_trees: int = DEFAULT_MAX_TREES,
    stats: Optional[dict] = None,
):
    """Return ``(algorithm used, value, witness)``.

    In optimization mode (``k`` None) the value is the optimum.  In decision
    mode it is True or False, and the witness is None for False.
    """
    graph = instance.graph
    if not graph.is_connected():
        raise DisconnectedGraphError("graph is disconnected; it has no spanning tree")
    fast = False
    if algo == "auto":
        graph_class = classify(graph)
        algo = pick_algorithm(graph_class)
        # a path or cycle has at most n spanning trees: check them all
        fast = graph_class == "path-or-cycle"
    if algo == "tree" or fast:
        if stats is not None and fast:
            stats["route"] = "single-edge-removal"
        res = solve_low_degree(instance)
        if k is None:
            return algo, res.opt, res.witness
        if res.opt <= k:
            return algo, True, res.witness
        return algo, False, None
    if algo == "brute":
        res = solve_bruteforce(instance, max_trees=max_trees)
        if stats is not None:
            stats["trees_enumerated"] = res.trees_enumerated
        if k is None:
            return algo, res.opt, res.witness
        return algo, res.opt <= k, res.witness if res.opt <= k else None
    if algo == "cactus":
        if k is None:
            res = solve_cactus(instance)
            if stats is not None:
                stats["decision_calls"] = res.trees_enumerated
            return algo, res.opt, res.witness
        witness = solve_cactus_decision(instance, k)
        return algo, witness is not None, witness
    if algo == "twdp":
        if k is None:
            res = solve_fpt(instance, td, stats=stats)
            if stats is not None:
                stats["decision_calls"] = res.trees_enumerated
            return algo, res.opt, res.witness
        witness = solve_fpt_decision(instance, td, k=k, stats=stats)
        return algo, witness is not None, witness
    raise ValueError(f"unknown algorithm {algo!r}")
