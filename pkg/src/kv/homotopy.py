"""The homotopy formula: f1 * f2 - f1 f2 as an integral over t of the KV flow.

With E_t = D(t y1, t y2) e^{<Z_t, x>}, the KV equations give
d/dt E_t = div(F_t, G_t) E_t + u_t(E_t). E_1 generates the star product of
exponentials and E_0 = e^{<y1 + y2, x>} the commutative one, so the
t-integral of the right-hand side generates f1 * f2 - f1 f2 for monomials.
"""
import logging
from math import factorial
from typing import NamedTuple, Optional

from src.envelope.duflo import star
from src.envelope.expseries import ExpSeriesPair
from src.errors import TruncationError
from src.kv.flow import flow_action, scaled_log_density, t_antiderivative_at_one, z_t_components
from src.kv.pair import KVPair
from src.liealg.adseries import coordinate_vector, poly_exp
from src.liealg.algebra import LieAlgebra
from src.liealg.sympoly import SymPoly

logger = logging.getLogger(__name__)


class HomotopyResult(NamedTuple):
    lhs: SymPoly
    rhs: SymPoly
    difference: SymPoly


def homotopy_generating(g: LieAlgebra, pair: KVPair, order: int) -> ExpSeriesPair:
    """Integral over [0, 1] of div(F_t, G_t) E_t + u_t(E_t), through joint degree ``order``."""
    if pair.truncation_degree < order:
        raise TruncationError(f"pair of order {pair.order} determines F, G only through degree {pair.truncation_degree}")
    d = g.dim
    t_index = 3 * d
    nvars = 3 * d + 1
    counted = range(d, 3 * d)
    blocks = (coordinate_vector(d, nvars, d), coordinate_vector(d, nvars, 2 * d))
    pairing = SymPoly.zero(nvars)
    for i, component in enumerate(z_t_components(g, blocks, order, counted, t_index)):
        pairing = pairing + component * SymPoly.variable(i, nvars)
    density = poly_exp(scaled_log_density(g, blocks, order, counted, t_index), order, counted)
    flow = density.mul(poly_exp(pairing, order, counted), order, counted)
    integrand = flow_action(g, pair, blocks, flow, order, counted, t_index)
    generating = ExpSeriesPair(g, order, t_antiderivative_at_one(integrand, t_index))
    logger.info("homotopy generating series on %s at order %d: %d terms", g.label, order, len(generating.poly.terms))
    return generating


def _weight(exponents) -> int:
    out = 1
    for k in exponents:
        out *= factorial(k)
    return out


def homotopy_check(
    g: LieAlgebra,
    pair: KVPair,
    f1: SymPoly,
    f2: SymPoly,
    order: int,
    generating: Optional[ExpSeriesPair] = None,
) -> HomotopyResult:
    """Compare f1 * f2 - f1 f2 with the t-integral, term by term over the monomials of f1 and f2."""
    for f in (f1, f2):
        if f.nvars != g.dim:
            raise ValueError(f"polynomial in {f.nvars} variables on a {g.dim}-dimensional algebra")
    if f1.degree() + f2.degree() > order:
        raise TruncationError(f"deg f1 + deg f2 = {f1.degree() + f2.degree()} exceeds truncation {order}")
    if generating is None:
        generating = homotopy_generating(g, pair, order)
    elif generating.order < order:
        raise TruncationError(f"generating series of order {generating.order}, need {order}")
    lhs = star(g, f1, f2) - f1 * f2
    rhs = SymPoly.zero(g.dim)
    for alpha, c1 in f1.terms.items():
        for beta, c2 in f2.terms.items():
            rhs = rhs + generating.component(alpha, beta).scale(c1 * c2 * _weight(alpha) * _weight(beta))
    return HomotopyResult(lhs, rhs, lhs - rhs)
