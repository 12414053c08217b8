"""Outer search turning a monotone decision procedure into an optimizer."""

from __future__ import annotations

from .graph import Instance


def search_budget(decide, upper: int, diameter):
    """Exact optimum of a monotone decision procedure by doubling then bisection.

    ``decide(k)`` returns a witness tree or None and ``diameter(witness)``
    its cost; the witness diameter tightens the upper end after every Yes.
    Returns ``(opt, witness, calls)``.
    """
    calls = 0

    def run(k):
        nonlocal calls
        calls += 1
        return decide(k)

    witness = run(0)
    if witness is not None:
        return 0, witness, calls
    lo, k = 0, 1
    while True:
        witness = run(min(k, upper))
        if witness is not None:
            break
        if k >= upper:
            raise AssertionError("no tree found at the upper bound")
        lo = k
        k *= 2
    best = witness
    hi = diameter(best)
    # invariant: answer No at lo, Yes at hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        w = run(mid)
        if w is None:
            lo = mid
        else:
            best = w
            hi = diameter(w)
    return hi, best, calls


def upper_bound(instance: Instance) -> int:
    """No spanning tree path has more than ``n - 2`` reloads."""
    return max(instance.graph.n - 1, 1) * max(instance.costs.max_entry(), 1)


