"""Build the hardness gadgets for tiny inputs and decide them at their budgets."""

from reloadtree.generators import (
    BinPackingInstance,
    CnfFormula,
    PartitionInstance,
    gen_degree3_from_3sat,
    gen_from_unary_binpacking,
    gen_outerplanar_from_3sat,
    gen_planar_from_partition,
)
from reloadtree.oracle import decide_bruteforce
from reloadtree.twdp import solve_fpt_decision


def show(label, inst, answer):
    g = inst.graph
    print(f"{label:<28} n={g.n:<3} m={g.m:<3} max_degree={g.max_degree()} budget={inst.budget:<3} -> "
          f"{'yes' if answer else 'no'}")


sat = CnfFormula(3, ((1, 2, 3), (-1, 2, -3)))
inst = gen_outerplanar_from_3sat(sat)
show("3-SAT fan, satisfiable", inst, decide_bruteforce(inst)[0])

every_sign = CnfFormula(3, tuple((a, b * 2, c * 3) for a in (1, -1) for b in (1, -1) for c in (1, -1)))
inst = gen_outerplanar_from_3sat(every_sign)
show("3-SAT fan, all 8 sign rows", inst, decide_bruteforce(inst)[0])

colorable = CnfFormula(4, ((1, -2, 3), (-1, -4), (-3, -4), (-1, 2, 3), (2, 4)))
inst = gen_degree3_from_3sat(colorable)
show("3-SAT degree 3", inst, decide_bruteforce(inst)[0])

for values in ((1, 1), (1, 2), (2, 3, 1)):
    inst = gen_planar_from_partition(PartitionInstance(values))
    show(f"Partition {values}", inst, solve_fpt_decision(inst) is not None)

for sizes, cap in (((1, 1), 1), ((2, 2, 2), 2)):
    inst = gen_from_unary_binpacking(BinPackingInstance(sizes, cap, 2))
    show(f"bin packing {sizes} B={cap}", inst, solve_fpt_decision(inst) is not None)
