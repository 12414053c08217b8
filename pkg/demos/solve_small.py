"""Solve one small cactus with every exact solver and print the trees found."""

from reloadtree import Instance, ReloadCostTable, solve_bruteforce, solve_cactus, solve_fpt
from reloadtree.graph import ColoredGraph, tree_diameter

# two triangles sharing vertex 2, plus a pendant edge; colors 0..2
graph = ColoredGraph(6, (
    (0, 1, 0), (1, 2, 1), (0, 2, 2),
    (2, 3, 0), (3, 4, 1), (2, 4, 2),
    (4, 5, 0),
))
costs = ReloadCostTable.from_matrix([
    [0, 3, 1],
    [3, 0, 2],
    [1, 2, 0],
])
inst = Instance(graph, costs)

for name, solver in (("enumeration", solve_bruteforce), ("cactus", solve_cactus), ("treewidth dp", solve_fpt)):
    res = solver(inst)
    edges = " ".join(f"{u}-{v}" for u, v, _ in res.witness.edges())
    print(f"{name:>12}: opt={res.opt} tree=[{edges}] check={tree_diameter(res.witness, costs)}")
