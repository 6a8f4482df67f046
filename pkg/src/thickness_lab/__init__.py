"""Exact F-thickness laboratory: recognizers, solvers, reduction, campaigns."""

from .classes import ClassDescriptor, builtin_class_names, builtin_descriptor
from .graph import Graph, GraphError, parse_edge_list, serialize_edge_list
from .reduction import ReducedInstance, label_short_paths, reduce_instance
from .solver import (
    Budget,
    BudgetExceededError,
    EdgeColoring,
    EdgePartition,
    SolveResult,
    chromatic_index,
    edge_color_decide,
    thickness_decide,
    thickness_exact,
    thickness_oracle,
    verify_coloring,
    verify_partition,
)

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "BudgetExceededError",
    "ClassDescriptor",
    "EdgeColoring",
    "EdgePartition",
    "Graph",
    "GraphError",
    "ReducedInstance",
    "SolveResult",
    "builtin_class_names",
    "builtin_descriptor",
    "chromatic_index",
    "edge_color_decide",
    "label_short_paths",
    "parse_edge_list",
    "reduce_instance",
    "serialize_edge_list",
    "thickness_decide",
    "thickness_exact",
    "thickness_oracle",
    "verify_coloring",
    "verify_partition",
]
