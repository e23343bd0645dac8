"""Numerical graph weights and the graph expansion of the star product."""
from src.weights.assembly import GraphStarResult, graph_star, star_to_order
from src.weights.montecarlo import (
    RunningStats,
    integrate_form,
    mc_weight,
    pullback_density,
    sample_chart,
    wheel_graph,
    wheel_weight_check,
)
from src.weights.propagator import circular_distance, collapse_limit_angle, propagator_angle

__all__ = [
    "GraphStarResult",
    "RunningStats",
    "circular_distance",
    "collapse_limit_angle",
    "graph_star",
    "integrate_form",
    "mc_weight",
    "propagator_angle",
    "pullback_density",
    "sample_chart",
    "star_to_order",
    "wheel_graph",
    "wheel_weight_check",
]
