"""Analytic functions of ad(x) as truncated polynomials, and free Lie series evaluated on g."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp
from scipy.linalg import expm

from src.errors import UnknownKind
from src.freelie.lyndon import bracket_tree
from src.freelie.series import FreeLieSeries
from src.liealg.algebra import LieAlgebra, ad_matrix_entries, ad_matrix_numeric
from src.liealg.sympoly import SymPoly
from src.types import AdFunctionKind, AdFunctionMode

logger = logging.getLogger(__name__)

Vector = List[SymPoly]

_s = sp.Symbol("s")
_UNIVARIATE = {
    AdFunctionKind.TODD: _s / (sp.exp(_s) - 1),
    AdFunctionKind.GAMMA: (1 - sp.exp(-_s)) / _s,
    AdFunctionKind.SQRT_J: (1 - sp.exp(-_s)) / _s,
}


@lru_cache(maxsize=None)
def univariate_coefficients(kind: AdFunctionKind, take_log: bool, degree: int) -> Tuple[Fraction, ...]:
    """Taylor coefficients c_0..c_degree of phi(s) or log phi(s) at s = 0."""
    expr = _UNIVARIATE[kind]
    if take_log:
        expr = sp.log(expr)
    expansion = sp.series(expr, _s, 0, degree + 1).removeO()
    coefficients = []
    for k in range(degree + 1):
        c = sp.Rational(sp.nsimplify(expansion.coeff(_s, k)))
        coefficients.append(Fraction(int(c.p), int(c.q)))
    return tuple(coefficients)


def _parse_kind(kind, mode) -> Tuple[AdFunctionKind, AdFunctionMode]:
    try:
        kind = AdFunctionKind(kind)
    except ValueError as exc:
        raise UnknownKind(f"unknown ad-function kind {kind!r}") from exc
    try:
        mode = AdFunctionMode(mode)
    except ValueError as exc:
        raise UnknownKind(f"unknown ad-function mode {mode!r}") from exc
    if kind is AdFunctionKind.SQRT_J and mode is not AdFunctionMode.DET_SQRT:
        raise UnknownKind("sqrt_j is a determinant and only exists in det_sqrt mode")
    return kind, mode


def _matmul(a, b, degree: int, counted: Optional[Sequence[int]]) -> list:
    n = len(a)
    nvars = a[0][0].nvars
    out = []
    for r in range(n):
        row = []
        for c in range(n):
            entry = SymPoly.zero(nvars)
            for m in range(n):
                if a[r][m].is_zero() or b[m][c].is_zero():
                    continue
                entry = entry + a[r][m].mul(b[m][c], degree, counted)
            row.append(entry)
        out.append(row)
    return out


def power_traces(
    g: LieAlgebra,
    vector: Vector,
    degree: int,
    counted: Optional[Sequence[int]] = None,
) -> List[SymPoly]:
    """[p_1, ..., p_degree] with p_k = tr(ad(vector)^k), truncated at degree."""
    nvars = vector[0].nvars
    ad = ad_matrix_entries(g, vector)
    traces: List[SymPoly] = []
    power = ad
    for k in range(1, degree + 1):
        if k > 1:
            power = _matmul(power, ad, degree, counted)
        trace = SymPoly.zero(nvars)
        for i in range(g.dim):
            trace = trace + power[i][i]
        traces.append(trace.truncate(degree, counted))
    return traces


def poly_exp(p: SymPoly, degree: int, counted: Optional[Sequence[int]] = None) -> SymPoly:
    """exp of a polynomial without constant term, truncated."""
    result = SymPoly.constant(1, p.nvars)
    power = SymPoly.constant(1, p.nvars)
    for k in range(1, degree + 1):
        power = power.mul(p, degree, counted)
        if power.is_zero():
            break
        result = result + power.scale(Fraction(1, factorial(k)))
    return result


def ad_function_at(
    g: LieAlgebra,
    kind: Union[AdFunctionKind, str],
    mode: Union[AdFunctionMode, str],
    vector: Vector,
    degree: int,
    counted: Optional[Sequence[int]] = None,
) -> SymPoly:
    """tr phi(ad v) or exp(1/2 tr log phi(ad v)) for a vector of polynomials v.

    The entries of v must have no constant term in the counted variables.
    """
    kind, mode = _parse_kind(kind, mode)
    if mode is AdFunctionMode.DET_SQRT:
        return poly_exp(half_trace_log(g, kind, vector, degree, counted), degree, counted)
    nvars = vector[0].nvars
    traces = power_traces(g, vector, degree, counted) if degree > 0 else []
    coefficients = univariate_coefficients(kind, False, degree)
    total = SymPoly.constant(coefficients[0] * g.dim, nvars)
    for k, p in enumerate(traces, start=1):
        total = total + p.scale(coefficients[k])
    return total


def half_trace_log(
    g: LieAlgebra,
    kind: Union[AdFunctionKind, str],
    vector: Vector,
    degree: int,
    counted: Optional[Sequence[int]] = None,
) -> SymPoly:
    """1/2 tr log phi(ad v); for sqrt_j this is log sqrt(j(v))."""
    kind, _ = _parse_kind(kind, AdFunctionMode.DET_SQRT)
    nvars = vector[0].nvars
    traces = power_traces(g, vector, degree, counted) if degree > 0 else []
    coefficients = univariate_coefficients(kind, True, degree)
    exponent = SymPoly.zero(nvars)
    for k, p in enumerate(traces, start=1):
        exponent = exponent + p.scale(coefficients[k] / 2)
    return exponent


@dataclass(frozen=True)
class AdSeriesScalar:
    """Truncated power series in the coordinates x0..x{d-1} of a point of g."""
    poly: SymPoly
    truncation_degree: int
    kind: AdFunctionKind
    mode: AdFunctionMode

    __hash__ = None  # type: ignore[assignment]

    def evaluate(self, point: Sequence):
        return self.poly.evaluate(point)

    def homogeneous(self, degree: int) -> SymPoly:
        return self.poly.homogeneous(degree)

    def to_text(self) -> str:
        return self.poly.to_text()


def coordinate_vector(dim: int, nvars: Optional[int] = None, offset: int = 0) -> Vector:
    """Variables offset..offset+dim-1 of an nvars-variable ring, as a vector of g."""
    nvars = nvars if nvars is not None else dim + offset
    return [SymPoly.variable(offset + i, nvars) for i in range(dim)]


def ad_analytic_series(
    g: LieAlgebra,
    kind: Union[AdFunctionKind, str],
    mode: Union[AdFunctionMode, str],
    degree: int,
) -> AdSeriesScalar:
    """Scalar series of ad(x) on g in the coordinates of x, e.g. sqrt(j(x))."""
    kind, mode = _parse_kind(kind, mode)
    if degree < 0:
        raise ValueError("degree must be non-negative")
    poly = ad_function_at(g, kind, mode, coordinate_vector(g.dim), degree)
    logger.debug("%s/%s on %s at degree %d: %d terms", kind.value, mode.value, g.label, degree, len(poly.terms))
    return AdSeriesScalar(poly, degree, kind, mode)


def _phi_one(matrix: np.ndarray) -> np.ndarray:
    """(e^M - 1)/M through the exponential of an augmented block matrix."""
    d = matrix.shape[0]
    block = np.zeros((2 * d, 2 * d))
    block[:d, :d] = matrix
    block[:d, d:] = np.eye(d)
    return expm(block)[:d, d:]


def ad_function_numeric(g: LieAlgebra, kind, mode, point: Sequence[float]) -> float:
    """Floating-point value of the same scalar from matrix functions of ad(x)."""
    kind, mode = _parse_kind(kind, mode)
    ad = ad_matrix_numeric(g, point)
    if kind is AdFunctionKind.TODD:
        value = np.linalg.inv(_phi_one(ad))
    else:
        value = _phi_one(-ad)
    if mode is AdFunctionMode.TRACE:
        return float(np.trace(value))
    return float(np.sqrt(np.linalg.det(value)))


def evaluate_free_lie(
    g: LieAlgebra,
    s: FreeLieSeries,
    assignment: Sequence[Sequence],
    degree: Optional[int] = None,
    counted: Optional[Sequence[int]] = None,
) -> list:
    """Image of s in g with y1, y2 sent to the given vectors.

    Vectors may hold rationals, floats or SymPoly entries. With SymPoly
    entries, products are truncated at ``degree`` in the counted variables
    (default: the truncation degree of s).
    """
    if len(assignment) != 2:
        raise ValueError("an assignment gives one vector for y1 and one for y2")
    symbolic = isinstance(assignment[0][0], SymPoly)
    degree = s.truncation_degree if degree is None else degree
    zero = assignment[0][0] * 0

    def bracket(x, y):
        out = [zero] * g.dim
        for i, j, k, c in g.structure:
            if symbolic:
                cross = x[i].mul(y[j], degree, counted) - x[j].mul(y[i], degree, counted)
            else:
                cross = x[i] * y[j] - x[j] * y[i]
            out[k] = out[k] + cross * c
        return out

    cache = {}

    def image(tree):
        key = tree
        if key in cache:
            return cache[key]
        if isinstance(tree, int):
            value = list(assignment[tree - 1])
        else:
            value = bracket(image(tree[0]), image(tree[1]))
        cache[key] = value
        return value

    result = [zero] * g.dim
    for word, c in s.terms.items():
        vector = image(bracket_tree(word))
        result = [r + v * c for r, v in zip(result, vector)]
    return result
