"""Enveloping algebra, the Duflo map and the exact star product on S(g)."""
from src.envelope.duflo import duflo_iso, duflo_iso_inverse, duflo_operator, star, star_scaled
from src.envelope.expseries import (
    ExpSeriesPair,
    duflo_density,
    duflo_density_scaled,
    exp_identity_defect,
    exp_star_expand,
)
from src.envelope.pbw import EnvElement, pbw_reduce, symmetrize, unsymmetrize

__all__ = [
    "EnvElement",
    "ExpSeriesPair",
    "duflo_density",
    "duflo_density_scaled",
    "duflo_iso",
    "duflo_iso_inverse",
    "duflo_operator",
    "exp_identity_defect",
    "exp_star_expand",
    "pbw_reduce",
    "star",
    "star_scaled",
    "symmetrize",
    "unsymmetrize",
]
