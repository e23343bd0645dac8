"""t-derivatives along the scaled KV flow: Z_t and the Duflo density D(t y1, t y2).

A pair (F, G) gives the tangential derivation u_t with u_t(y_i) = [y_i, F_t]
(resp. G_t), F_t = F(t y1, t y2) / t. Polynomials in t carry t as the last
variable of the ring.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence

from src.errors import TruncationError
from src.freelie.bch import bch_series
from src.freelie.series import FreeLieSeries
from src.freelie.tder import TangentialDerivation, apply_tangential
from src.kv.kv2 import TraceSeries, Vector, bracket_vectors, divergence_of_vectors, y_blocks
from src.kv.pair import KVPair
from src.liealg.adseries import evaluate_free_lie, half_trace_log, poly_exp
from src.liealg.algebra import LieAlgebra
from src.liealg.sympoly import SymPoly
from src.types import AdFunctionKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TPolynomialSeries:
    """Polynomial in t with free Lie coefficients, keyed by the power of t."""
    coefficients: Dict[int, FreeLieSeries]

    __hash__ = None  # type: ignore[assignment]

    def coefficient(self, power: int) -> FreeLieSeries:
        return self.coefficients[power]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients.values())

    def to_text(self) -> str:
        pieces = [f"t^{k}: {c.to_text()}" for k, c in sorted(self.coefficients.items()) if not c.is_zero()]
        return "; ".join(pieces) or "0"


def dzt_residual(pair: KVPair, order: int) -> TPolynomialSeries:
    """d/dt Z_t - u_t(Z_t) with Z_t = Z(t y1, t y2) / t, through degree ``order``.

    The degree-m part of both sides is the coefficient of t^(m-2), so the
    result has one free Lie coefficient per power 0..order-2.
    """
    if order > pair.order:
        raise TruncationError(f"pair of order {pair.order} cannot check d/dt Z_t at degree {order}")
    z = bch_series(order)
    coefficients: Dict[int, FreeLieSeries] = {}
    for m in range(2, order + 1):
        lhs = z.homogeneous(m).scale(m - 1)
        rhs = FreeLieSeries.zero(order)
        for a in range(1, m):
            u = TangentialDerivation(
                pair.F.homogeneous(a).with_truncation(order),
                pair.G.homogeneous(a).with_truncation(order),
            )
            rhs = rhs + apply_tangential(u, z.homogeneous(m - a).with_truncation(order)).homogeneous(m)
        coefficients[m - 2] = (lhs - rhs).homogeneous(m)
    result = TPolynomialSeries(coefficients)
    logger.debug("d/dt Z_t residual through degree %d: %s", order, result.to_text())
    return result


def attach_t(poly: SymPoly, counted: Sequence[int], t_index: int, shift: int) -> SymPoly:
    """Multiply each monomial by t^(counted degree + shift)."""
    terms = {}
    for e, c in poly.terms.items():
        power = sum(e[i] for i in counted) + shift
        if power < 0:
            raise ValueError("negative power of t")
        key = e[:t_index] + (e[t_index] + power,) + e[t_index + 1:]
        terms[key] = terms.get(key, 0) + c
    return SymPoly(poly.nvars, terms)


def scaled_components(
    g: LieAlgebra,
    s: FreeLieSeries,
    blocks: Sequence[Vector],
    order: int,
    counted: Sequence[int],
    t_index: int,
) -> Vector:
    """s(t y1, t y2) / t evaluated on g."""
    values = evaluate_free_lie(g, s, blocks, order, counted)
    return [attach_t(component, counted, t_index, -1) for component in values]


def scaled_log_density(
    g: LieAlgebra,
    blocks: Sequence[Vector],
    order: int,
    counted: Sequence[int],
    t_index: int,
) -> SymPoly:
    """log D(t y1, t y2) with D = sqrt j(y1) sqrt j(y2) / sqrt j(Z)."""
    u, v = blocks
    z = evaluate_free_lie(g, bch_series(order), (u, v), order, counted)
    log_density = (
        half_trace_log(g, AdFunctionKind.SQRT_J, u, order, counted)
        + half_trace_log(g, AdFunctionKind.SQRT_J, v, order, counted)
        - half_trace_log(g, AdFunctionKind.SQRT_J, z, order, counted)
    )
    return attach_t(log_density, counted, t_index, 0)


def flow_action(
    g: LieAlgebra,
    pair: KVPair,
    blocks: Sequence[Vector],
    target: SymPoly,
    order: int,
    counted: Sequence[int],
    t_index: int,
) -> SymPoly:
    """div(F_t, G_t) target + <[y1, F_t], d_y1> target + <[y2, G_t], d_y2> target."""
    u, v = blocks
    f_t = scaled_components(g, pair.F.truncate(order), blocks, order, counted, t_index)
    g_t = scaled_components(g, pair.G.truncate(order), blocks, order, counted, t_index)
    offset = counted[0]
    div = divergence_of_vectors(g, [f_t, g_t], order, target.nvars, offset)
    total = div.mul(target, order, counted)
    for start, block, image in ((offset, u, f_t), (offset + g.dim, v, g_t)):
        field = bracket_vectors(g, block, image, order, counted)
        for i, component in enumerate(field):
            total = total + component.mul(target.derivative(start + i), order, counted)
    return total


def density_flow_residual(g: LieAlgebra, pair: KVPair, order: int) -> TraceSeries:
    """d/dt D_t - div(F_t, G_t) D_t - u_t(D_t) with D_t = D(t y1, t y2), through degree ``order``.

    Vanishes when (F, G) satisfies both KV equations on g through ``order``.
    """
    if pair.truncation_degree < order:
        raise TruncationError(f"pair of order {pair.order} determines F, G only through degree {pair.truncation_degree}")
    d = g.dim
    t_index = 2 * d
    nvars = 2 * d + 1
    counted = range(2 * d)
    blocks = y_blocks(d, nvars)
    density = poly_exp(scaled_log_density(g, blocks, order, counted, t_index), order, counted)
    lhs = density.derivative(t_index)
    rhs = flow_action(g, pair, blocks, density, order, counted, t_index)
    residual = TraceSeries(g, order, (lhs - rhs).truncate(order, counted))
    logger.debug("density flow residual on %s at order %d: %d terms", g.label, order, len(residual.poly.terms))
    return residual


def t_antiderivative_at_one(poly: SymPoly, t_index: int) -> SymPoly:
    """Integral over t in [0, 1], dropping the t variable."""
    terms: Dict[tuple, Fraction] = {}
    for e, c in poly.terms.items():
        key = e[:t_index] + e[t_index + 1:]
        terms[key] = terms.get(key, 0) + c / (e[t_index] + 1)
    return SymPoly(poly.nvars - 1, terms)


def z_t_components(g: LieAlgebra, blocks: Sequence[Vector], order: int, counted: Sequence[int], t_index: int) -> List[SymPoly]:
    """Components of Z_t = Z(t y1, t y2) / t on g."""
    return scaled_components(g, bch_series(order), blocks, order, counted, t_index)
