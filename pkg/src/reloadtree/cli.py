"""Command-line front end: solve, gen, validate and bench.

Every command prints human-readable lines followed by one JSON summary line
(only the JSON line with ``--json``).  Exit codes: 0 success, 1 failed
validation or solver disagreement, 2 decision answer No, 64 unparseable
input, 65 algorithm or instance mismatch, 70 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

from .decomposition import validate_decomposition
from .errors import (
    BudgetExceededError,
    DecompositionError,
    DisconnectedGraphError,
    NotACactusError,
    ParseError,
    ReductionError,
    ResourceLimitError,
)
from .formats import (
    parse_binpacking,
    parse_decomposition,
    parse_dimacs_cnf,
    parse_instance,
    parse_partition,
    serialize_instance,
)
from .generators import (
    BinPackingInstance,
    CnfFormula,
    PartitionInstance,
    gen_degree3_from_3sat,
    gen_from_unary_binpacking,
    gen_outerplanar_from_3sat,
    gen_planar_from_partition,
    gen_random_cactus,
    gen_random_costs,
    normalize_3sat_three_occurrences,
)
from .graph import Instance, check_triangle_inequality, edge_set_diameter
from .oracle import DEFAULT_MAX_TREES
from .solve import ALGORITHMS, classify, is_cactus, run_solver

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_NO = 2
EXIT_PARSE = 64
EXIT_MISMATCH = 65
EXIT_RESOURCE = 70

REDUCTIONS = ("3sat-outerplanar", "3sat-deg3", "partition", "ubp", "random-cactus")


class _Out:
    def __init__(self, json_only, stream):
        self.json_only = json_only
        self.stream = stream

    def say(self, text=""):
        if not self.json_only:
            print(text, file=self.stream)

    def summary(self, payload):
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")), file=self.stream)


def _read(path):
    with open(path, encoding="ascii") as fh:
        return fh.read()


def _load_instance(path):
    return parse_instance(_read(path))


def _load_td(path):
    return parse_decomposition(_read(path))


def _fail(out, command, code, message):
    print(f"error: {message}", file=sys.stderr)
    out.summary({"command": command, "status": "error", "exit": code, "error": message})
    return code


# -- solve -------------------------------------------------------------------


def cmd_solve(args, out) -> int:
    try:
        instance = _load_instance(args.instance)
        td = _load_td(args.td) if args.td else None
    except (ParseError, OSError) as exc:
        return _fail(out, "solve", EXIT_PARSE, str(exc))
    graph = instance.graph
    graph_class = classify(graph)
    out.say(f"instance: n={graph.n} m={graph.m} colors={instance.costs.num_colors} "
            f"max_degree={graph.max_degree()} class={graph_class}")
    stats = {}
    start = time.perf_counter()
    try:
        algo, value, witness = run_solver(
            instance, args.algo, k=args.decision, td=td, max_trees=args.max_trees, stats=stats
        )
    except (NotACactusError, DecompositionError, DisconnectedGraphError) as exc:
        return _fail(out, "solve", EXIT_MISMATCH, str(exc))
    except (BudgetExceededError, ResourceLimitError) as exc:
        return _fail(out, "solve", EXIT_RESOURCE, str(exc))
    elapsed = time.perf_counter() - start
    edges = [list(graph.edges[e][:2]) for e in witness.edge_ids] if witness is not None else None
    diameter = edge_set_diameter(graph, instance.costs, witness.edge_ids) if witness is not None else None
    out.say(f"algorithm: {algo}")
    report = {
        "command": "solve",
        "status": "ok",
        "n": graph.n,
        "m": graph.m,
        "colors": instance.costs.num_colors,
        "max_degree": graph.max_degree(),
        "class": graph_class,
        "algorithm": algo,
        "witness": edges,
        "witness_diameter": diameter,
        "stats": stats,
    }
    if args.decision is None:
        out.say(f"optimum: {value}")
        report["opt"] = value
        code = EXIT_OK
    else:
        out.say(f"diameter <= {args.decision}: {'yes' if value else 'no'}")
        report["k"] = args.decision
        report["answer"] = bool(value)
        code = EXIT_OK if value else EXIT_NO
    if edges is not None:
        out.say("witness edges: " + " ".join(f"{u}-{v}" for u, v in edges))
    out.say(f"time: {elapsed:.3f}s")
    report["exit"] = code
    out.summary(report)
    return code


# -- gen ---------------------------------------------------------------------


def _cnf_from_source(text):
    num_vars, entries = parse_dimacs_cnf(text)
    lines = [line for _, line in entries]
    return CnfFormula(num_vars, tuple(c for c, _ in entries)), lines


def _reduction_context(exc, formula, lines):
    """Line number of the clause the error is about, if any."""
    if exc.clause is not None and exc.clause < len(lines):
        return lines[exc.clause]
    if exc.variable is not None and formula is not None and lines:
        for j, clause in enumerate(formula.clauses):
            if any(abs(l) == exc.variable for l in clause) and j < len(lines):
                return lines[j]
    return None


def cmd_gen(args, out) -> int:
    name = args.reduction
    source, target = args.source, args.out
    if name == "random-cactus" and target is None:
        source, target = None, source
    formula, lines = None, []
    try:
        if name == "random-cactus":
            graph = gen_random_cactus(args.n, seed=args.seed, num_colors=args.colors)
            instance = Instance(graph, gen_random_costs(args.colors, args.max_cost, seed=args.seed))
        else:
            if source is None:
                return _fail(out, "gen", EXIT_PARSE, f"{name} needs a source file")
            text = _read(source)
            if name in ("3sat-outerplanar", "3sat-deg3"):
                formula, lines = _cnf_from_source(text)
                if name == "3sat-outerplanar":
                    instance = gen_outerplanar_from_3sat(formula)
                else:
                    instance = gen_degree3_from_3sat(normalize_3sat_three_occurrences(formula))
            elif name == "partition":
                instance = gen_planar_from_partition(PartitionInstance(parse_partition(text)))
            else:
                sizes, capacity, bins = parse_binpacking(text)
                instance = gen_from_unary_binpacking(BinPackingInstance(sizes, capacity, bins))
    except (ParseError, OSError) as exc:
        return _fail(out, "gen", EXIT_PARSE, str(exc))
    except ReductionError as exc:
        line = _reduction_context(exc, formula, lines)
        message = f"line {line}: {exc}" if line is not None else str(exc)
        return _fail(out, "gen", EXIT_MISMATCH, message)
    text = serialize_instance(instance)
    if target is None or target == "-":
        if not args.json:
            sys.stdout.write(text)
    else:
        Path(target).write_text(text, encoding="ascii")
        out.say(f"wrote {target}")
    out.summary({
        "command": "gen",
        "status": "ok",
        "exit": EXIT_OK,
        "reduction": name,
        "n": instance.graph.n,
        "m": instance.graph.m,
        "colors": instance.costs.num_colors,
        "budget": instance.budget,
        "out": target,
    })
    return EXIT_OK


# -- validate ----------------------------------------------------------------


def cmd_validate(args, out) -> int:
    checks = []

    def record(name, ok, detail=""):
        checks.append({"check": name, "ok": ok, "detail": detail})
        out.say(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""))

    info = {}
    instance = None
    try:
        instance = _load_instance(args.instance)
        record("format", True)
        record("symmetry", True)
    except ParseError as exc:
        if exc.kind == "symmetry":
            record("format", True)
            record("symmetry", False, str(exc))
        else:
            record("format", False, str(exc))
    except OSError as exc:
        record("format", False, str(exc))
    if instance is not None:
        graph = instance.graph
        info["connected"] = graph.is_connected()
        info["cactus"] = graph.is_connected() and is_cactus(graph)
        info["triangle_inequality"] = check_triangle_inequality(graph, instance.costs)
        for key in ("connected", "cactus", "triangle_inequality"):
            out.say(f"info {key}: {'yes' if info[key] else 'no'}")
        if args.require_cactus:
            record("cactus", info["cactus"])
        if args.require_triangle:
            record("triangle-inequality", info["triangle_inequality"])
        if args.td:
            try:
                report = validate_decomposition(graph, _load_td(args.td))
                record("decomposition", report.ok, "" if report.ok else f"{report.axiom}: {report.message}")
            except (ParseError, OSError) as exc:
                record("decomposition", False, str(exc))
    ok = all(c["ok"] for c in checks)
    code = EXIT_OK if ok else EXIT_FAILED
    out.summary({"command": "validate", "status": "ok" if ok else "failed", "exit": code,
                 "checks": checks, "info": info})
    return code


# -- bench -------------------------------------------------------------------


def _bench_algorithms(instance, max_trees):
    from .oracle import kirchhoff_count

    graph = instance.graph
    algos = []
    if kirchhoff_count(graph) <= max_trees:
        algos.append("brute")
    if is_cactus(graph):
        algos.append("cactus")
    algos.append("twdp")
    return algos


def cmd_bench(args, out) -> int:
    paths = sorted(Path(args.directory).glob("*.rct"))
    rows = []
    disagreements = []
    errors = []
    for path in paths:
        try:
            instance = _load_instance(path)
        except ParseError as exc:
            errors.append(f"{path.name}: {exc}")
            continue
        if not instance.graph.is_connected():
            errors.append(f"{path.name}: disconnected")
            continue
        values = {}
        for algo in _bench_algorithms(instance, args.max_trees):
            start = time.perf_counter()
            try:
                _, value, _ = run_solver(instance, algo, max_trees=args.max_trees)
            except (ResourceLimitError, BudgetExceededError) as exc:
                errors.append(f"{path.name} {algo}: {exc}")
                continue
            elapsed = time.perf_counter() - start
            values[algo] = value
            rows.append((path.name, algo, value, f"{elapsed:.4f}"))
        if len(set(values.values())) > 1:
            disagreements.append(path.name)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("instance", "algo", "opt", "time"))
    writer.writerows(rows)
    if args.csv:
        Path(args.csv).write_text(buf.getvalue(), encoding="ascii")
        out.say(f"wrote {args.csv}")
    elif not args.json:
        sys.stdout.write(buf.getvalue())
    for e in errors:
        out.say(f"skipped {e}")
    for name in disagreements:
        out.say(f"DISAGREE {name}")
    code = EXIT_FAILED if disagreements else EXIT_OK
    out.summary({"command": "bench", "status": "ok" if code == 0 else "failed", "exit": code,
                 "instances": len(paths), "runs": len(rows), "disagreements": disagreements,
                 "skipped": len(errors)})
    return code


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reloadtree", description="Minimum reload-diameter spanning trees.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="optimize or decide one instance")
    p.add_argument("instance")
    p.add_argument("--algo", choices=ALGORITHMS, default="auto")
    p.add_argument("--decision", type=int, metavar="K", help="decide whether the diameter can be at most K")
    p.add_argument("--td", help="tree decomposition in PACE .td format")
    p.add_argument("--max-trees", type=int, default=DEFAULT_MAX_TREES)
    p.add_argument("--json", action="store_true", help="print only the JSON summary")

    p = sub.add_parser("gen", help="write an instance from a reduction or at random")
    p.add_argument("reduction", choices=REDUCTIONS)
    p.add_argument("source", nargs="?", help="source problem file (output path for random-cactus)")
    p.add_argument("out", nargs="?", help="output path; stdout when omitted")
    p.add_argument("--n", type=int, default=10, help="vertices for random-cactus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--colors", type=int, default=3, help="colors for random-cactus")
    p.add_argument("--max-cost", type=int, default=10, help="largest reload cost for random-cactus")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("validate", help="check an instance and optionally a decomposition")
    p.add_argument("instance")
    p.add_argument("--td")
    p.add_argument("--require-cactus", action="store_true")
    p.add_argument("--require-triangle", action="store_true")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("bench", help="cross-check all applicable solvers over a directory of .rct files")
    p.add_argument("directory")
    p.add_argument("--csv", help="write the CSV here instead of stdout")
    p.add_argument("--max-trees", type=int, default=10**5)
    p.add_argument("--json", action="store_true")
    return parser


COMMANDS = {"solve": cmd_solve, "gen": cmd_gen, "validate": cmd_validate, "bench": cmd_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = _Out(args.json, sys.stdout)
    return COMMANDS[args.command](args, out)


if __name__ == "__main__":
    sys.exit(main())
