"""Both sides of e^{y1} * e^{y2} = D(y1, y2) e^{Z(y1, y2)} as truncated generating series.

A series lives in 3d variables: the point x of g* (0..d-1), the y1 block u
(d..2d-1) and the y2 block v (2d..3d-1). Truncation is by joint degree in
u and v; e^{y} acting on S(g) is e^{<y, x>}.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial
from typing import Dict, List, Tuple, Union

from src.envelope.duflo import duflo_iso, duflo_iso_inverse
from src.freelie.bch import bch_series
from src.liealg.adseries import coordinate_vector, evaluate_free_lie, half_trace_log, poly_exp
from src.liealg.algebra import LieAlgebra
from src.liealg.sympoly import SymPoly
from src.types import AdFunctionKind

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]


def _multi_factorial(exponents: Exponents) -> int:
    out = 1
    for k in exponents:
        out *= factorial(k)
    return out


def monomials_up_to(dim: int, degree: int) -> List[Exponents]:
    """All exponent tuples in dim variables of total degree <= degree."""
    out = []
    for total in range(degree + 1):
        for letters in combinations_with_replacement(range(dim), total):
            exponents = [0] * dim
            for letter in letters:
                exponents[letter] += 1
            out.append(tuple(exponents))
    return out


def _scale_by_degree(poly: SymPoly, t: Fraction, shift: int, counted) -> SymPoly:
    """Multiply each term by t^(counted degree + shift)."""
    return poly.map_coefficients(lambda e, c: c * t ** (sum(e[i] for i in counted) + shift))


@dataclass(frozen=True)
class ExpSeriesPair:
    """Polynomial in (x, u, v) truncated at joint (u, v)-degree ``order``."""
    algebra: LieAlgebra
    order: int
    poly: SymPoly

    __hash__ = None  # type: ignore[assignment]

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def counted(self) -> range:
        return range(self.dim, 3 * self.dim)

    def __eq__(self, other):
        if not isinstance(other, ExpSeriesPair):
            return NotImplemented
        return self.order == other.order and self.poly == other.poly

    def __sub__(self, other: "ExpSeriesPair") -> "ExpSeriesPair":
        order = min(self.order, other.order)
        return ExpSeriesPair(self.algebra, order, (self.poly - other.poly).truncate(order, self.counted))

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def homogeneous(self, degree: int) -> SymPoly:
        return self.poly.homogeneous(degree, self.counted)

    def component(self, alpha: Exponents, beta: Exponents) -> SymPoly:
        """Coefficient of u^alpha v^beta, as a polynomial on g*."""
        d = self.dim
        out: Dict[Exponents, Fraction] = {}
        for e, c in self.poly.terms.items():
            if e[d:2 * d] == tuple(alpha) and e[2 * d:] == tuple(beta):
                out[e[:d]] = out.get(e[:d], 0) + c
        return SymPoly(d, out)


def exp_star_expand(g: LieAlgebra, order: int, t: Union[int, Fraction] = 1) -> ExpSeriesPair:
    """e^{y1} *_t e^{y2} by bilinear extension of the star product over monomials."""
    if order < 1:
        raise ValueError("order must be at least 1")
    t = Fraction(t)
    gt = g if t == 1 else g.scaled(t)
    d = g.dim
    nvars = 3 * d
    monomials = monomials_up_to(d, order)
    iso = {alpha: duflo_iso(gt, SymPoly.monomial(alpha)) for alpha in monomials}
    terms: Dict[Exponents, Fraction] = {}
    for alpha in monomials:
        for beta in monomials:
            if sum(alpha) + sum(beta) > order:
                continue
            product = duflo_iso_inverse(gt, iso[alpha] * iso[beta])
            weight = Fraction(1, _multi_factorial(alpha) * _multi_factorial(beta))
            for e, c in product.terms.items():
                key = e + alpha + beta
                terms[key] = terms.get(key, 0) + weight * c
    logger.info("expanded e^u * e^v on %s to order %d (%d terms)", g.label, order, len(terms))
    return ExpSeriesPair(g, order, SymPoly(nvars, terms))


def _density_parts(g: LieAlgebra, order: int) -> Tuple[SymPoly, List[SymPoly]]:
    """log D(u, v) and the components of Z(u, v) on g."""
    d = g.dim
    nvars = 3 * d
    counted = range(d, nvars)
    u = coordinate_vector(d, nvars, d)
    v = coordinate_vector(d, nvars, 2 * d)
    z = evaluate_free_lie(g, bch_series(order), (u, v), order, counted)
    log_density = (
        half_trace_log(g, AdFunctionKind.SQRT_J, u, order, counted)
        + half_trace_log(g, AdFunctionKind.SQRT_J, v, order, counted)
        - half_trace_log(g, AdFunctionKind.SQRT_J, z, order, counted)
    )
    return log_density, z


def _assemble(g: LieAlgebra, order: int, log_density: SymPoly, z: List[SymPoly]) -> ExpSeriesPair:
    d = g.dim
    nvars = 3 * d
    counted = range(d, nvars)
    pairing = SymPoly.zero(nvars)
    for i, component in enumerate(z):
        pairing = pairing + component * SymPoly.variable(i, nvars)
    density = poly_exp(log_density, order, counted)
    poly = density.mul(poly_exp(pairing, order, counted), order, counted)
    return ExpSeriesPair(g, order, poly)


def duflo_density(g: LieAlgebra, order: int) -> ExpSeriesPair:
    """D(y1, y2) e^{Z(y1, y2)} with D = sqrt j(y1) sqrt j(y2) / sqrt j(Z)."""
    if order < 1:
        raise ValueError("order must be at least 1")
    log_density, z = _density_parts(g, order)
    return _assemble(g, order, log_density, z)


def duflo_density_scaled(g: LieAlgebra, order: int, t: Union[int, Fraction]) -> ExpSeriesPair:
    """D(t y1, t y2) e^{Z_t(y1, y2)} with Z_t = Z(t y1, t y2) / t, for t != 0."""
    t = Fraction(t)
    if t == 0:
        raise ValueError("the scaled density needs t != 0")
    log_density, z = _density_parts(g, order)
    counted = range(g.dim, 3 * g.dim)
    log_density = _scale_by_degree(log_density, t, 0, counted)
    z = [_scale_by_degree(component, t, -1, counted) for component in z]
    return _assemble(g, order, log_density, z)


def exp_identity_defect(g: LieAlgebra, order: int, t: Union[int, Fraction] = 1) -> ExpSeriesPair:
    """Star side minus density side; vanishes identically when the identity holds."""
    t = Fraction(t)
    density = duflo_density(g, order) if t == 1 else duflo_density_scaled(g, order, t)
    return exp_star_expand(g, order, t) - density
