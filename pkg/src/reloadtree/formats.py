"""Text formats: reload-cost instances, tree decompositions, CNF, partition and bin packing.

All parsers report malformed input with :class:`ParseError` carrying the
1-based line number.  ``#`` starts a comment in the instance, partition and
bin-packing formats; DIMACS uses ``c`` comment lines.
"""

from __future__ import annotations

from .errors import InvalidGraphError, ParseError
from .graph import ColoredGraph, Instance, ReloadCostTable


def _content_lines(text, comment="#"):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(comment, 1)[0].strip() if comment else raw.strip()
        if line:
            yield number, line.split()


def _ints(tokens, number):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", number) from None


def parse_instance(text: str) -> Instance:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input", 1)
    number, tokens = lines[0]
    if tokens[0] != "rct" or len(tokens) != 4:
        raise ParseError("header must be 'rct <n> <m> <num_colors>'", number)
    n, m, num_colors = _ints(tokens[1:], number)
    if min(n, m, num_colors) < 0:
        raise ParseError("header counts must be non-negative", number)
    pos = 1
    edges = []
    seen = {}
    for _ in range(m):
        if pos >= len(lines):
            raise ParseError(f"expected {m} edge lines, found {len(edges)}", lines[-1][0])
        number, tokens = lines[pos]
        pos += 1
        if tokens[0] != "e" or len(tokens) != 4:
            raise ParseError("edge line must be 'e <u> <v> <color>'", number)
        u, v, color = _ints(tokens[1:], number)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge endpoint outside [0, {n})", number)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", number)
        if not 0 <= color < num_colors:
            raise ParseError(f"color {color} outside [0, {num_colors})", number)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge {{{u}, {v}}} (first on line {seen[key]})", number)
        seen[key] = number
        edges.append((u, v, color))
    rows = []
    row_lines = []
    for _ in range(num_colors):
        if pos >= len(lines):
            raise ParseError(f"expected {num_colors} cost rows, found {len(rows)}", lines[-1][0])
        number, tokens = lines[pos]
        pos += 1
        if tokens[0] != "c" or len(tokens) != num_colors + 1:
            raise ParseError(f"cost row must be 'c' followed by {num_colors} integers", number)
        row = _ints(tokens[1:], number)
        if any(x < 0 or x >= 2**64 for x in row):
            raise ParseError("cost entries must lie in [0, 2^64)", number)
        rows.append(row)
        row_lines.append(number)
    for a in range(num_colors):
        for b in range(a):
            if rows[a][b] != rows[b][a]:
                raise ParseError(f"cost matrix is not symmetric at ({a}, {b})", row_lines[a], kind="symmetry")
    budget = None
    if pos < len(lines):
        number, tokens = lines[pos]
        pos += 1
        if tokens[0] != "k" or len(tokens) != 2:
            raise ParseError("expected 'k <budget>'", number)
        (budget,) = _ints(tokens[1:], number)
        if budget < 0:
            raise ParseError("budget must be non-negative", number)
    if pos < len(lines):
        raise ParseError("unexpected trailing content", lines[pos][0])
    try:
        graph = ColoredGraph(n, tuple(edges))
        costs = ReloadCostTable(num_colors, tuple(tuple(r) for r in rows))
        return Instance(graph, costs, budget)
    except InvalidGraphError as exc:
        raise ParseError(str(exc), 1) from None


def serialize_instance(instance: Instance) -> str:
    g, costs = instance.graph, instance.costs
    out = [f"rct {g.n} {g.m} {costs.num_colors}"]
    out += [f"e {u} {v} {c}" for u, v, c in g.edges]
    out += ["c " + " ".join(map(str, row)) for row in costs.cost]
    if instance.budget is not None:
        out.append(f"k {instance.budget}")
    return "\n".join(out) + "\n"


def read_instance(path) -> Instance:
    with open(path, encoding="ascii") as fh:
        return parse_instance(fh.read())


def write_instance(path, instance: Instance) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(serialize_instance(instance))


# -- tree decompositions ---------------------------------------------------


def parse_decomposition(text: str):
    """Parse a PACE ``.td`` file into a :class:`~reloadtree.decomposition.TreeDecomposition`.

    Vertices in the file are 1-based as in the PACE convention and are shifted
    to the 0-based ids used everywhere else.
    """
    from .decomposition import TreeDecomposition

    lines = list(_content_lines(text, comment=None))
    lines = [(n, t) for n, t in lines if t[0] != "c"]
    if not lines:
        raise ParseError("empty decomposition", 1)
    number, tokens = lines[0]
    if tokens[:2] != ["s", "td"] or len(tokens) != 5:
        raise ParseError("header must be 's td <num_bags> <width+1> <n>'", number)
    num_bags, _, n = _ints(tokens[2:], number)
    bags = {}
    tree_edges = []
    for number, tokens in lines[1:]:
        if tokens[0] == "b":
            values = _ints(tokens[1:], number)
            if not values:
                raise ParseError("bag line needs an id", number)
            bag_id, verts = values[0], values[1:]
            if not 1 <= bag_id <= num_bags:
                raise ParseError(f"bag id {bag_id} outside [1, {num_bags}]", number)
            if bag_id - 1 in bags:
                raise ParseError(f"bag {bag_id} defined twice", number)
            if any(not 1 <= v <= n for v in verts):
                raise ParseError(f"bag vertex outside [1, {n}]", number)
            bags[bag_id - 1] = frozenset(v - 1 for v in verts)
        else:
            values = _ints(tokens, number)
            if len(values) != 2 or not all(1 <= x <= num_bags for x in values):
                raise ParseError("tree edge line must name two bag ids", number)
            tree_edges.append((values[0] - 1, values[1] - 1))
    for b in range(num_bags):
        bags.setdefault(b, frozenset())
    return TreeDecomposition(n, tuple(bags[b] for b in range(num_bags)), tuple(tree_edges))


def serialize_decomposition(td) -> str:
    out = [f"s td {len(td.bags)} {td.width + 1} {td.n}"]
    for i, bag in enumerate(td.bags):
        out.append(" ".join(["b", str(i + 1)] + [str(v + 1) for v in sorted(bag)]))
    out += [f"{a + 1} {b + 1}" for a, b in td.tree_edges]
    return "\n".join(out) + "\n"


# -- source problems for the generators --------------------------------------


def parse_dimacs_cnf(text: str):
    """Parse DIMACS CNF into ``(num_vars, clauses)`` with signed 1-based literals."""
    header = None
    clauses = []
    current = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if header is not None or len(tokens) != 4 or tokens[1] != "cnf":
                raise ParseError("header must be 'p cnf <vars> <clauses>'", number)
            header = tuple(_ints(tokens[2:], number))
            continue
        if header is None:
            raise ParseError("clause before 'p cnf' header", number)
        for lit in _ints(tokens, number):
            if lit == 0:
                clauses.append((tuple(current), number))
                current = []
            else:
                if abs(lit) > header[0]:
                    raise ParseError(f"literal {lit} exceeds variable count {header[0]}", number)
                current.append(lit)
    if header is None:
        raise ParseError("missing 'p cnf' header", 1)
    if current:
        clauses.append((tuple(current), number))
    return header[0], clauses


def serialize_dimacs_cnf(num_vars, clauses) -> str:
    out = [f"p cnf {num_vars} {len(clauses)}"]
    out += [" ".join(map(str, clause)) + " 0" for clause in clauses]
    return "\n".join(out) + "\n"


def parse_partition(text: str):
    """Parse ``p part n`` followed by ``n`` positive integers."""
    lines = list(_content_lines(text))
    if not lines or lines[0][1][:2] != ["p", "part"] or len(lines[0][1]) != 3:
        raise ParseError("header must be 'p part <n>'", lines[0][0] if lines else 1)
    (n,) = _ints(lines[0][1][2:], lines[0][0])
    values = []
    for number, tokens in lines[1:]:
        for x in _ints(tokens, number):
            if x < 1:
                raise ParseError(f"item {x} is not positive", number)
            values.append(x)
    if len(values) != n:
        raise ParseError(f"expected {n} integers, found {len(values)}", lines[-1][0])
    return values


def parse_binpacking(text: str):
    """Parse ``p ubp n B k`` followed by ``n`` positive item sizes into ``(sizes, B, k)``."""
    lines = list(_content_lines(text))
    if not lines or lines[0][1][:2] != ["p", "ubp"] or len(lines[0][1]) != 5:
        raise ParseError("header must be 'p ubp <n> <B> <k>'", lines[0][0] if lines else 1)
    n, capacity, bins = _ints(lines[0][1][2:], lines[0][0])
    sizes = []
    for number, tokens in lines[1:]:
        for x in _ints(tokens, number):
            if x < 1:
                raise ParseError(f"item size {x} is not positive", number)
            sizes.append(x)
    if len(sizes) != n:
        raise ParseError(f"expected {n} item sizes, found {len(sizes)}", lines[-1][0])
    return sizes, capacity, bins
