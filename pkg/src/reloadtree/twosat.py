"""2-SAT via the implication graph and strongly connected components."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class TwoSatFormula:
    """Conjunction of two-literal clauses over variables ``0..num_vars-1``.

    A literal is ``(var, polarity)`` with ``polarity`` True for the positive
    literal.  Unit clauses are written as ``(lit, lit)``.
    """

    num_vars: int
    clauses: tuple = field(default=())

    def __post_init__(self):
        normalized = []
        for clause in self.clauses:
            (a, pa), (b, pb) = clause
            for var in (a, b):
                if not 0 <= var < self.num_vars:
                    raise ValueError(f"variable {var} outside [0, {self.num_vars})")
            normalized.append(((int(a), bool(pa)), (int(b), bool(pb))))
        object.__setattr__(self, "clauses", tuple(normalized))

    def evaluate(self, assignment) -> bool:
        return all(assignment[a] == pa or assignment[b] == pb for (a, pa), (b, pb) in self.clauses)


def _node(lit):
    var, pol = lit
    return 2 * var + (0 if pol else 1)


def solve_2sat(formula: TwoSatFormula, stats: Optional[dict] = None) -> Optional[list]:
    """Return a satisfying assignment as a list of bools, or ``None`` if unsatisfiable.

    ``stats``, when given, receives the number of graph steps performed under
    the key ``"steps"`` (vertices plus arcs visited across both passes).
    """
    n = 2 * formula.num_vars
    succ = [[] for _ in range(n)]
    pred = [[] for _ in range(n)]
    for a, b in formula.clauses:
        na, nb = _node(a), _node(b)
        # (a or b) gives not-a -> b and not-b -> a
        succ[na ^ 1].append(nb)
        succ[nb ^ 1].append(na)
        pred[nb].append(na ^ 1)
        pred[na].append(nb ^ 1)
    steps = 0

    # first pass: iterative DFS recording finish order
    order = []
    seen = [False] * n
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        stack = [(s, 0)]
        while stack:
            v, i = stack[-1]
            steps += 1
            if i < len(succ[v]):
                stack[-1] = (v, i + 1)
                w = succ[v][i]
                if not seen[w]:
                    seen[w] = True
                    stack.append((w, 0))
            else:
                stack.pop()
                order.append(v)

    # second pass on the reverse graph; components come out in topological order
    comp = [-1] * n
    label = 0
    for s in reversed(order):
        if comp[s] != -1:
            continue
        comp[s] = label
        stack = [s]
        while stack:
            v = stack.pop()
            steps += 1
            for w in pred[v]:
                steps += 1
                if comp[w] == -1:
                    comp[w] = label
                    stack.append(w)
        label += 1

    if stats is not None:
        stats["steps"] = steps
    assignment = []
    for var in range(formula.num_vars):
        pos, neg = comp[2 * var], comp[2 * var + 1]
        if pos == neg:
            return None
        # the literal whose component is later in topological order is true
        assignment.append(pos > neg)
    if not formula.evaluate(assignment):
        raise AssertionError("2-SAT produced an assignment that violates a clause")
    return assignment
