"""Heavy k-disjoint matchings: heuristics, exact oracle and benchmark harness."""

from .algorithms import AlgorithmConfig, parse_config, solve
from .bench import compare_report, read_plan, run_plan
from .coloring import b_greedy_and_extend, greedy_b_matching, misra_gries_color
from .exact import brute_force_kdjm, export_ilp
from .graph import (
    DisjointMatching,
    WeightedGraph,
    build_graph,
    solution_weight,
    sort_edges_desc,
    validate_solution,
)
from .instances import gen_hypercube_pendant, gen_rmat, gen_triangle_pendant, load_instance
from .iterative import blossom_it, blossom_max_weight_matching, gpa_it, greedy_it
from .kec import KecFlags, k_ec
from .node_centered import Rating, node_centered

__version__ = "0.1.0"

__all__ = [
    "AlgorithmConfig", "DisjointMatching", "KecFlags", "Rating", "WeightedGraph",
    "b_greedy_and_extend", "blossom_it", "blossom_max_weight_matching", "brute_force_kdjm",
    "build_graph", "compare_report", "export_ilp", "gen_hypercube_pendant", "gen_rmat", "gen_triangle_pendant",
    "gpa_it", "greedy_b_matching", "greedy_it", "k_ec", "load_instance", "misra_gries_color",
    "node_centered", "parse_config", "read_plan", "run_plan", "solution_weight", "solve", "sort_edges_desc",
    "validate_solution",
]
