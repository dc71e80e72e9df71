"""2-factor homology of plane trivalent graphs with perfect matchings."""

from .invariants import build_complex, homology, two_factor_polynomial
from .plane_graph import MatchedGraph, load_graph, read_graph, validate, write_graph
from .resolution import in_family_G, resolve

__all__ = [
    "MatchedGraph",
    "build_complex",
    "homology",
    "in_family_G",
    "load_graph",
    "read_graph",
    "resolve",
    "two_factor_polynomial",
    "validate",
    "write_graph",
]
