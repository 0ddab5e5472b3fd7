"""Hierarchical MaxCut on small simulated quantum machines.

Large graphs are split into blocks that fit a qubit budget, each block is
solved with a simulated QAOA (or a classical routine), and the block
solutions are stitched together by solving a smaller signed-weight MaxCut.
"""

from .estimator import BruteForceMaxCut, LocalSearchMaxCut, QAOA2MaxCut, QAOAMaxCut, check_graph
from .graph import Graph, cut_value, generate, parse_edge_list, total_weight, write_edge_list
from .merge import CoarseProblem, build_coarse, coarse_objective, expand, solve_merge
from .oracle import asymptotic_optimum, brute_force, local_search_polish, multistart_local_search
from .partition import Partition, greedy_modularity_partition, modularity, random_partition
from .qaoa import QaoaConfig, QaoaParams, qaoa_solve
from .solver import SolveReport, SolverChoice, select_denominator, solve

__version__ = "0.1.0"

__all__ = [
    "BruteForceMaxCut",
    "CoarseProblem",
    "Graph",
    "LocalSearchMaxCut",
    "Partition",
    "QAOA2MaxCut",
    "QAOAMaxCut",
    "QaoaConfig",
    "QaoaParams",
    "SolveReport",
    "SolverChoice",
    "asymptotic_optimum",
    "brute_force",
    "build_coarse",
    "check_graph",
    "coarse_objective",
    "cut_value",
    "expand",
    "generate",
    "greedy_modularity_partition",
    "local_search_polish",
    "modularity",
    "multistart_local_search",
    "parse_edge_list",
    "qaoa_solve",
    "random_partition",
    "select_denominator",
    "solve",
    "solve_merge",
    "total_weight",
    "write_edge_list",
]
