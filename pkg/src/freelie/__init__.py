"""Exact arithmetic in the free Lie algebra on two generators."""
from src.freelie.bch import (
    bch_matrix_oracle,
    bch_series,
    dynkin_defect,
    is_primitive,
    log_exp_product,
    series_of_ad,
)
from src.freelie.lyndon import lyndon_words, witt_dimension
from src.freelie.series import FreeLieSeries, bracket, lyndon_basis, parse_series
from src.freelie.tder import (
    TangentialDerivation,
    apply_tangential,
    directional_substitute,
    substitute,
)

__all__ = [
    "FreeLieSeries",
    "TangentialDerivation",
    "apply_tangential",
    "bch_matrix_oracle",
    "bch_series",
    "bracket",
    "directional_substitute",
    "dynkin_defect",
    "is_primitive",
    "log_exp_product",
    "lyndon_basis",
    "lyndon_words",
    "parse_series",
    "series_of_ad",
    "substitute",
    "witt_dimension",
]
