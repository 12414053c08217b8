"""Spanning trees of minimum reload-cost diameter in edge-colored graphs."""

from .cactus import BlockTree, CactusSolver, compute_block_tree, solve_cactus, solve_cactus_decision
from .decomposition import (
    TreeDecomposition,
    heuristic_decomposition,
    min_fill_order,
    validate_decomposition,
)
from .errors import (
    BudgetExceededError,
    DecompositionError,
    DisconnectedGraphError,
    InvalidGraphError,
    InvalidPathError,
    NotACactusError,
    NotATreeError,
    ParseError,
    ReductionError,
    ReloadTreeError,
    ResourceLimitError,
)
from .formats import parse_decomposition, parse_instance, read_instance, serialize_instance, write_instance
from .graph import (
    ColoredGraph,
    Instance,
    ReloadCostTable,
    SpanningForest,
    eccentricity,
    path_reload_cost,
    reload_distance,
    tree_diameter,
)
from .oracle import OracleResult, decide_bruteforce, enumerate_spanning_trees, kirchhoff_count, solve_bruteforce
from .solve import classify, run_solver
from .twdp import build_nice_triple, solve_fpt, solve_fpt_decision
from .twosat import TwoSatFormula, solve_2sat

__version__ = "0.1.0"

__all__ = [
    "BlockTree",
    "BudgetExceededError",
    "CactusSolver",
    "ColoredGraph",
    "DecompositionError",
    "DisconnectedGraphError",
    "Instance",
    "InvalidGraphError",
    "InvalidPathError",
    "NotACactusError",
    "NotATreeError",
    "OracleResult",
    "ParseError",
    "ReductionError",
    "ReloadCostTable",
    "ReloadTreeError",
    "ResourceLimitError",
    "SpanningForest",
    "TreeDecomposition",
    "TwoSatFormula",
    "build_nice_triple",
    "classify",
    "compute_block_tree",
    "decide_bruteforce",
    "eccentricity",
    "enumerate_spanning_trees",
    "heuristic_decomposition",
    "kirchhoff_count",
    "min_fill_order",
    "parse_decomposition",
    "parse_instance",
    "path_reload_cost",
    "read_instance",
    "reload_distance",
    "run_solver",
    "serialize_instance",
    "solve_2sat",
    "solve_bruteforce",
    "solve_cactus",
    "solve_cactus_decision",
    "solve_fpt",
    "solve_fpt_decision",
    "tree_diameter",
    "validate_decomposition",
    "write_instance",
    "__version__",
]
