"""The Duflo map I = symmetrize o sqrt(j)(d) and the star product it induces on S(g)."""
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Union

from src.envelope.pbw import EnvElement, symmetrize, unsymmetrize
from src.liealg.adseries import ad_analytic_series
from src.liealg.algebra import LieAlgebra
from src.liealg.sympoly import SymPoly
from src.types import AdFunctionKind, AdFunctionMode

logger = logging.getLogger(__name__)


@lru_cache(maxsize=256)
def _sqrt_j(g: LieAlgebra, degree: int) -> SymPoly:
    return ad_analytic_series(g, AdFunctionKind.SQRT_J, AdFunctionMode.DET_SQRT, degree).poly


def _apply_operator(symbol: SymPoly, f: SymPoly, skip_constant: bool = False) -> SymPoly:
    """Constant-coefficient differential operator with the given symbol, on the first variables."""
    total = SymPoly.zero(f.nvars)
    for beta, c in symbol.terms.items():
        if skip_constant and not any(beta):
            continue
        term = f
        for i, k in enumerate(beta):
            for _ in range(k):
                term = term.derivative(i)
                if term.is_zero():
                    break
        if not term.is_zero():
            total = total + term.scale(c)
    return total


def duflo_operator(g: LieAlgebra, f: SymPoly) -> SymPoly:
    """sqrt(j)(d) applied to f; only symbol terms up to deg f can act."""
    return _apply_operator(_sqrt_j(g, f.degree()), f)


def duflo_iso(g: LieAlgebra, f: SymPoly) -> EnvElement:
    return symmetrize(g, duflo_operator(g, f))


def duflo_iso_inverse(g: LieAlgebra, element: EnvElement) -> SymPoly:
    """Solve sqrt(j)(d) f = unsymmetrize(element) by back-substitution.

    The operator is 1 + N with N strictly lowering degree, so iterating
    f <- p - N f settles after deg p + 1 rounds.
    """
    p = unsymmetrize(g, element)
    symbol = _sqrt_j(g, p.degree())
    f = p
    for _ in range(p.degree() + 1):
        updated = p - _apply_operator(symbol, f, skip_constant=True)
        if updated == f:
            break
        f = updated
    return f


def star(g: LieAlgebra, f1: SymPoly, f2: SymPoly) -> SymPoly:
    """f1 * f2 pulled back from U(g): I^{-1}(I(f1) I(f2))."""
    return duflo_iso_inverse(g, duflo_iso(g, f1) * duflo_iso(g, f2))


def star_scaled(g: LieAlgebra, t: Union[int, Fraction], f1: SymPoly, f2: SymPoly) -> SymPoly:
    """Star product for the structure constants t f_ij^k."""
    return star(g.scaled(Fraction(t)), f1, f2)
