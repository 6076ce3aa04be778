"""Plumbing graphs of line-arrangement Milnor fiber boundaries.

Build the boundary's plumbing graph from an arrangement's intersection
poset, normalize it by plumbing-calculus moves, classify the normal form
(single line, pencil, near-pencil, double pencil, or general), and in the
general case reconstruct the intersection poset.
"""

from .arrangement import (
    Arrangement,
    ExceptionalClass,
    RationalLine,
    classify,
    enumerate_arrangements,
    from_lines,
    is_arrangement_isomorphic,
    make_family,
    validate,
)
from .boundary import (
    build_boundary_graph,
    build_config_graph,
    build_reduced_graph,
    fiber_classes,
    reduce_boundary_graph,
)
from .calculus import Move, apply_move, is_normal_form, normalize
from .cfrac import dual_ncf, eval_ncf, expand_ncf, string_multiplicities
from .plumbing import (
    PlumbingGraph,
    check_multiplicity_system,
    first_homology,
    is_complete_bipartite,
    is_isomorphic,
    regular_node_graph,
    special_node_graph,
    to_dot,
)
from .reconstruct import BoundaryClass, classify_boundary, determine_poset, roundtrip

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "ExceptionalClass",
    "RationalLine",
    "classify",
    "enumerate_arrangements",
    "from_lines",
    "is_arrangement_isomorphic",
    "make_family",
    "validate",
    "build_boundary_graph",
    "build_config_graph",
    "build_reduced_graph",
    "fiber_classes",
    "reduce_boundary_graph",
    "Move",
    "apply_move",
    "is_normal_form",
    "normalize",
    "dual_ncf",
    "eval_ncf",
    "expand_ncf",
    "string_multiplicities",
    "PlumbingGraph",
    "check_multiplicity_system",
    "first_homology",
    "is_complete_bipartite",
    "is_isomorphic",
    "regular_node_graph",
    "special_node_graph",
    "to_dot",
    "BoundaryClass",
    "classify_boundary",
    "determine_poset",
    "roundtrip",
    "__version__",
]
