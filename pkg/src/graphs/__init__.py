"""Admissible graphs, their bidifferential operators and component structure."""
from src.graphs.admissible import (
    AdmissibleGraph,
    canonical_classes,
    enumerate_graphs,
    enumerate_graphs_by_target_sets,
    isomorphic,
    parse_graph,
)
from src.graphs.bidiff import bidiff_apply
from src.graphs.components import ComponentReport, DegenerateQuotient, classify_components, quotient_graph

__all__ = [
    "AdmissibleGraph",
    "ComponentReport",
    "DegenerateQuotient",
    "bidiff_apply",
    "canonical_classes",
    "classify_components",
    "enumerate_graphs",
    "enumerate_graphs_by_target_sets",
    "isomorphic",
    "parse_graph",
    "quotient_graph",
]
