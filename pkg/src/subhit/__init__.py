"""Exact solvers for (colorful) H-subgraph hitting on graphs of bounded treewidth."""
from .colorful import SolveResult, solve_colorful
from .config import Caps, default_caps
from .errors import ContractError, DispatchError, ParseError, ResourceLimitError, SubhitError
from .graph import BoundariedGraph, ColoredGraph, SimpleGraph
from .oracle import min_hitting_set, occurrences, solve_oracle
from .pattern import PatternAnalysis, analyze
from .patterns import named_pattern
from .plain import solve_plain, solve_plain_clique
from .treedecomp import TreeDecomposition, decompose, heuristic_decompose, make_nice

__all__ = [
    "BoundariedGraph", "Caps", "ColoredGraph", "ContractError", "DispatchError", "ParseError",
    "PatternAnalysis", "ResourceLimitError", "SimpleGraph", "SolveResult", "SubhitError",
    "TreeDecomposition", "analyze", "decompose", "default_caps", "heuristic_decompose",
    "make_nice", "min_hitting_set", "named_pattern", "occurrences", "solve_colorful",
    "solve_oracle", "solve_plain", "solve_plain_clique",
]
