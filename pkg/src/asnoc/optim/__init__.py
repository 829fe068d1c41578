"""Exact solvers: min-cost flow, binary ILP, matching, clique, independent set."""

from .graphs import (complement_edges, max_bipartite_matching, max_clique,
                     max_independent_set, max_matching)
from .ilp import EQ, GE, LE, IlpModel, IlpResult, solve_ilp
from .mcf import FlowNetwork, FlowResult, add_convex_arc, min_cost_flow

__all__ = [
    "EQ", "GE", "LE", "FlowNetwork", "FlowResult", "IlpModel", "IlpResult",
    "add_convex_arc", "complement_edges", "max_bipartite_matching", "max_clique",
    "max_independent_set", "max_matching", "min_cost_flow", "solve_ilp",
]
