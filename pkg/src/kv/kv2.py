"""The trace side of the KV equations on a concrete Lie algebra.

Trace series are polynomials in the coordinates of y1 (variables 0..d-1)
and y2 (d..2d-1), optionally followed by a parameter t.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from src.errors import TruncationError
from src.freelie.bch import bch_series
from src.freelie.series import FreeLieSeries
from src.freelie.tder import TangentialDerivation
from src.kv.pair import KVPair
from src.liealg.adseries import ad_function_at, coordinate_vector, evaluate_free_lie
from src.liealg.algebra import LieAlgebra
from src.liealg.sympoly import SymPoly
from src.types import AdFunctionKind, AdFunctionMode

logger = logging.getLogger(__name__)

Vector = List[SymPoly]


@dataclass(frozen=True)
class TraceSeries:
    """Exact polynomial in the y1, y2 coordinate blocks, truncated at ``order``."""
    algebra: LieAlgebra
    order: int
    poly: SymPoly

    __hash__ = None  # type: ignore[assignment]

    def __eq__(self, other):
        if not isinstance(other, TraceSeries):
            return NotImplemented
        return self.order == other.order and self.poly == other.poly

    def __sub__(self, other: "TraceSeries") -> "TraceSeries":
        order = min(self.order, other.order)
        return TraceSeries(self.algebra, order, (self.poly - other.poly).truncate(order, self.counted))

    @property
    def counted(self) -> range:
        return range(2 * self.algebra.dim)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def homogeneous(self, degree: int) -> SymPoly:
        return self.poly.homogeneous(degree, self.counted)

    def names(self) -> List[str]:
        d = self.algebra.dim
        names = [f"u{i}" for i in range(d)] + [f"v{i}" for i in range(d)]
        return names + ["t"] * (self.poly.nvars - 2 * d)

    def to_text(self) -> str:
        return self.poly.to_text(self.names())


def y_blocks(dim: int, nvars: int, offset: int = 0):
    """Coordinate vectors of y1 and y2 placed at ``offset`` in an nvars-variable ring."""
    return coordinate_vector(dim, nvars, offset), coordinate_vector(dim, nvars, offset + dim)


def bracket_vectors(g: LieAlgebra, a: Vector, b: Vector, degree: int, counted: Sequence[int]) -> Vector:
    out = [SymPoly.zero(a[0].nvars) for _ in range(g.dim)]
    for i, j, k, c in g.structure:
        cross = a[i].mul(b[j], degree, counted) - a[j].mul(b[i], degree, counted)
        out[k] = out[k] + cross.scale(c)
    return out


def trace_term(
    g: LieAlgebra,
    y: Vector,
    image: Vector,
    wrt: Sequence[int],
    degree: int,
    counted: Sequence[int],
) -> SymPoly:
    """tr(ad y o d image) where the derivative is taken in the variables ``wrt`` of y."""
    total = SymPoly.zero(y[0].nvars)
    for j, var in enumerate(wrt):
        column = [component.derivative(var) for component in image]
        for a, b, k, c in g.structure:
            if k != j:
                continue
            total = total + (y[a].mul(column[b], degree, counted) - y[b].mul(column[a], degree, counted)).scale(c)
    return total.truncate(degree, counted)


def divergence_of_vectors(
    g: LieAlgebra,
    images: Sequence[Vector],
    degree: int,
    nvars: int,
    offset: int = 0,
) -> SymPoly:
    """tr(ad y1 o d_{y1} U1) + tr(ad y2 o d_{y2} U2) for polynomial maps U1, U2."""
    d = g.dim
    u, v = y_blocks(d, nvars, offset)
    counted = range(offset, offset + 2 * d)
    return (
        trace_term(g, u, images[0], range(offset, offset + d), degree, counted)
        + trace_term(g, v, images[1], range(offset + d, offset + 2 * d), degree, counted)
    )


def divergence(g: LieAlgebra, u: TangentialDerivation, order: int) -> TraceSeries:
    """div(u) = tr(ad y1 o d_{y1} u1) + tr(ad y2 o d_{y2} u2) evaluated on g."""
    if u.truncation_degree < order:
        raise TruncationError(f"components truncated at {u.truncation_degree}, need {order}")
    nvars = 2 * g.dim
    yu, yv = y_blocks(g.dim, nvars)
    images = [evaluate_free_lie(g, component.truncate(order), (yu, yv), order) for component in (u.u1, u.u2)]
    return TraceSeries(g, order, divergence_of_vectors(g, images, order, nvars))


def kv2_rhs(g: LieAlgebra, order: int, z: Optional[Vector] = None) -> TraceSeries:
    """1/2 tr(todd(ad y1) + todd(ad y2) - todd(ad Z) - 1) with Z = log(e^{y1} e^{y2})."""
    nvars = 2 * g.dim
    yu, yv = y_blocks(g.dim, nvars)
    if z is None:
        z = evaluate_free_lie(g, bch_series(order), (yu, yv), order)

    def todd_trace(vector: Vector) -> SymPoly:
        return ad_function_at(g, AdFunctionKind.TODD, AdFunctionMode.TRACE, vector, order)

    poly = (todd_trace(yu) + todd_trace(yv) - todd_trace(z)).scale(Fraction(1, 2)) - Fraction(g.dim, 2)
    return TraceSeries(g, order, poly)


def kv2_residual(g: LieAlgebra, pair: KVPair, order: int) -> TraceSeries:
    """div(F, G) minus the Todd-trace side; zero when (F, G) satisfies KV2 on g through ``order``."""
    if pair.truncation_degree < order:
        raise TruncationError(f"pair of order {pair.order} determines F, G only through degree {pair.truncation_degree}")
    lhs = divergence(g, TangentialDerivation(pair.F, pair.G), order)
    residual = lhs - kv2_rhs(g, order)
    logger.debug("KV2 residual on %s at order %d: %d terms", g.label, order, len(residual.poly.terms))
    return residual


def kv2_linear_rows(g: LieAlgebra, degree: int, basis: Sequence[FreeLieSeries]):
    """Rows of the degree-k KV2 constraint on the F-columns then G-columns of ``basis``.

    The divergence of a homogeneous pair has the same degree, so lower
    degrees never enter.
    """
    nvars = 2 * g.dim
    yu, yv = y_blocks(g.dim, nvars)
    columns = []
    for slot in (0, 1):
        for element in basis:
            image = evaluate_free_lie(g, element, (yu, yv), degree)
            zero = [SymPoly.zero(nvars) for _ in range(g.dim)]
            images = [image, zero] if slot == 0 else [zero, image]
            columns.append(divergence_of_vectors(g, images, degree, nvars).homogeneous(degree))
    target = kv2_rhs(g, degree).homogeneous(degree)
    monomials = sorted(set(target.terms).union(*(column.terms for column in columns)))
    rows = [[column.coefficient(m) for column in columns] for m in monomials]
    rhs = [target.coefficient(m) for m in monomials]
    return rows, rhs
