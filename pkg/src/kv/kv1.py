"""The first KV equation and its degree-by-degree solution over the Lyndon basis."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy as sp

from src.errors import InfeasibleDegree, OrderCap, TruncationError
from src.freelie.bch import log_exp_product, series_of_ad
from src.freelie.lyndon import lyndon_basis_words
from src.freelie.series import FreeLieSeries, bracket, lyndon_basis
from src.freelie.tder import substitute
from src.kv.kv2 import kv2_linear_rows
from src.kv.pair import KVPair
from src.liealg.algebra import LieAlgebra
from src.types import MAX_KV_ORDER, AdSeriesKind

logger = logging.getLogger(__name__)

KernelBasis = List[Tuple[FreeLieSeries, FreeLieSeries]]


def kv1_lhs(order: int) -> FreeLieSeries:
    """y1 + y2 - log(e^{y2} e^{y1})."""
    if order < 1:
        raise TruncationError("kv1_lhs needs order >= 1")
    y1 = FreeLieSeries.generator(1, order)
    y2 = FreeLieSeries.generator(2, order)
    return y1 + y2 - log_exp_product(y2, y1, order)


def kv1_residual(F: FreeLieSeries, G: FreeLieSeries, order: int) -> FreeLieSeries:
    """lhs - (1 - e^{-ad y1}) F - (e^{ad y2} - 1) G through degree ``order``.

    F and G are read as exact polynomials, so truncation order - 1 suffices.
    """
    for name, series in (("F", F), ("G", G)):
        if series.truncation_degree < order - 1:
            raise TruncationError(f"{name} truncated at {series.truncation_degree}, need {order - 1}")
    F, G = F.with_truncation(order), G.with_truncation(order)
    y1 = FreeLieSeries.generator(1, order)
    y2 = FreeLieSeries.generator(2, order)
    return (
        kv1_lhs(order)
        - series_of_ad(AdSeriesKind.ONE_MINUS_EXP_NEG_AD, y1, F, order)
        - series_of_ad(AdSeriesKind.EXP_AD_MINUS_ONE, y2, G, order)
    )


def _coordinates(s: FreeLieSeries, words: Sequence[Tuple[int, ...]]) -> List[Fraction]:
    return [s.coefficient(w) for w in words]


def _matrix(rows: Iterable[Sequence[Fraction]], ncols: int) -> sp.Matrix:
    rows = [list(r) for r in rows]
    if not rows:
        return sp.zeros(0, ncols)
    return sp.Matrix([[sp.Rational(c.numerator, c.denominator) for c in r] for r in rows])


def _column(values: Sequence[Fraction]) -> sp.Matrix:
    return sp.Matrix([sp.Rational(c.numerator, c.denominator) for c in values])


def kv1_linear_system(
    degree: int,
    F: Optional[FreeLieSeries] = None,
    G: Optional[FreeLieSeries] = None,
) -> Tuple[sp.Matrix, sp.Matrix]:
    """[y1, F_k] + [y2, G_k] = (residual of the lower parts)_{k+1} in Lyndon coordinates.

    Columns: F coordinates then G coordinates in the degree-k Lyndon basis.
    Rows: the degree-(k+1) Lyndon basis.
    """
    F = F if F is not None else FreeLieSeries.zero(degree)
    G = G if G is not None else FreeLieSeries.zero(degree)
    basis = lyndon_basis(2, degree)
    rows_words = lyndon_basis_words(2, degree + 1)
    y1 = FreeLieSeries.generator(1, degree + 1)
    y2 = FreeLieSeries.generator(2, degree + 1)
    columns = [bracket(y1, b.with_truncation(degree + 1)) for b in basis]
    columns += [bracket(y2, b.with_truncation(degree + 1)) for b in basis]
    lower_F = F.truncate(degree - 1) if degree > 1 else FreeLieSeries.zero(1)
    lower_G = G.truncate(degree - 1) if degree > 1 else FreeLieSeries.zero(1)
    target = kv1_residual(lower_F.with_truncation(degree), lower_G.with_truncation(degree), degree + 1)
    matrix = _matrix(zip(*[_coordinates(c, rows_words) for c in columns]), len(columns))
    return matrix, _column(_coordinates(target.homogeneous(degree + 1), rows_words))


def _symmetry_rows(degree: int) -> List[List[Fraction]]:
    """G_k - F_k(-y2, -y1) = 0 in coordinates."""
    words = lyndon_basis_words(2, degree)
    size = len(words)
    rows = [[Fraction(0)] * (2 * size) for _ in range(size)]
    for col, element in enumerate(lyndon_basis(2, degree)):
        image = substitute(element, {1: -FreeLieSeries.generator(2, degree), 2: -FreeLieSeries.generator(1, degree)})
        for row, c in enumerate(_coordinates(image, words)):
            rows[row][col] -= c
    for row in range(size):
        rows[row][size + row] += 1
    return rows


def _solve(matrix: sp.Matrix, rhs: sp.Matrix) -> Optional[sp.Matrix]:
    """Particular solution with every free parameter set to 0, or None if inconsistent."""
    try:
        solution, params = matrix.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    return solution.subs({p: 0 for p in params})


def _series(values: Sequence, words: Sequence[Tuple[int, ...]], degree: int) -> FreeLieSeries:
    return FreeLieSeries(
        {w: Fraction(int(sp.fraction(v)[0]), int(sp.fraction(v)[1])) for w, v in zip(words, values)},
        degree,
    )


@dataclass
class KVSolution:
    """A particular KV pair, the kernel of the KV1 system per degree, and the degrees solved without the symmetry."""
    pair: KVPair
    kernels: Dict[int, KernelBasis] = field(default_factory=dict)
    fallback_degrees: List[int] = field(default_factory=list)


def _extra_rows(algebras: Sequence[LieAlgebra], degree: int):
    basis = lyndon_basis(2, degree)
    rows, rhs = [], []
    for g in algebras:
        g_rows, g_rhs = kv2_linear_rows(g, degree, basis)
        rows.extend(g_rows)
        rhs.extend(g_rhs)
    return rows, rhs


def solve_kv(order: int, algebras: Sequence[LieAlgebra] = ()) -> KVSolution:
    """Solve KV1 through degree ``order`` and, on each algebra given, KV2 through order - 1.

    In each degree k the unknowns are F_k, G_k. Imposed: KV1 in degree
    k + 1, KV2 in degree k on every algebra, and the symmetry
    G(y1, y2) = F(-y2, -y1). When the symmetry is incompatible with the
    rest the degree is solved without it.
    """
    if order < 2:
        raise TruncationError("the KV equations need order >= 2")
    if order > MAX_KV_ORDER:
        raise OrderCap(f"KV order {order} exceeds the cap {MAX_KV_ORDER}")
    top = order - 1
    F = FreeLieSeries.zero(top)
    G = FreeLieSeries.zero(top)
    kernels: Dict[int, KernelBasis] = {}
    fallback_degrees: List[int] = []
    for degree in range(1, order):
        words = lyndon_basis_words(2, degree)
        size = len(words)
        system, rhs = kv1_linear_system(degree, F, G)
        kernels[degree] = [
            (_series(v[:size], words, top), _series(v[size:], words, top)) for v in system.nullspace()
        ]
        extra_rows, extra_rhs = _extra_rows(algebras, degree)
        constrained = system.col_join(_matrix(extra_rows, 2 * size))
        constrained_rhs = rhs.col_join(_column(extra_rhs)) if extra_rhs else rhs
        symmetry = _matrix(_symmetry_rows(degree), 2 * size)
        values = _solve(constrained.col_join(symmetry), constrained_rhs.col_join(sp.zeros(size, 1)))
        if values is None:
            logger.warning("degree %d: symmetric representative incompatible, using the pivot solution", degree)
            fallback_degrees.append(degree)
            values = _solve(constrained, constrained_rhs)
        if values is None:
            raise InfeasibleDegree(f"KV system inconsistent in degree {degree}")
        F = F + _series(values[:size], words, top)
        G = G + _series(values[size:], words, top)
        logger.debug("degree %d solved: F_%d = %s", degree, degree, F.homogeneous(degree).to_text())
    pair = KVPair(F, G, order)
    residual = kv1_residual(F, G, order)
    if not residual.is_zero():
        raise InfeasibleDegree(f"KV1 residual nonzero after solving: {residual.to_text()}")
    logger.info("solved KV1 through order %d with %d algebras: F = %s", order, len(algebras), F.to_text())
    return KVSolution(pair, kernels, fallback_degrees)


def solve_kv1(order: int) -> KVSolution:
    """Particular (F, G) with zero KV1 residual through degree ``order``."""
    return solve_kv(order, ())
