"""Finite-dimensional Lie algebras, their polynomial functions and ad-series."""
from src.liealg.adseries import (
    AdSeriesScalar,
    ad_analytic_series,
    ad_function_at,
    ad_function_numeric,
    coordinate_vector,
    evaluate_free_lie,
)
from src.liealg.algebra import (
    LieAlgebra,
    ad_matrix,
    builtin_lie_algebra,
    dump_lie_algebra,
    lie_algebra_from_dict,
    load_lie_algebra,
    make_lie_algebra,
    poisson_bracket,
)
from src.liealg.sympoly import SymPoly, parse_polynomial

__all__ = [
    "AdSeriesScalar",
    "LieAlgebra",
    "SymPoly",
    "ad_analytic_series",
    "ad_function_at",
    "ad_function_numeric",
    "ad_matrix",
    "builtin_lie_algebra",
    "coordinate_vector",
    "dump_lie_algebra",
    "evaluate_free_lie",
    "lie_algebra_from_dict",
    "load_lie_algebra",
    "make_lie_algebra",
    "parse_polynomial",
    "poisson_bracket",
]
