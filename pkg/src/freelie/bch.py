"""BCH series, the Dynkin primitivity test and power series in ad."""
import logging
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import List, Union

import numpy as np
from scipy.linalg import expm

from src.errors import TruncationError, UnknownKind
from src.freelie.lyndon import AssocPoly, Word, assoc_add, assoc_mul, right_normed
from src.freelie.series import FreeLieSeries, bracket
from src.types import AdSeriesKind

logger = logging.getLogger(__name__)


def assoc_exp(poly: AssocPoly, degree: int) -> AssocPoly:
    """exp of a polynomial without constant term, truncated at the given word length."""
    result: AssocPoly = {(): Fraction(1)}
    power: AssocPoly = {(): Fraction(1)}
    for k in range(1, degree + 1):
        power = assoc_mul(power, poly, degree)
        if not power:
            break
        assoc_add(result, power, Fraction(1, factorial(k)))
    return result


def assoc_log(poly: AssocPoly, degree: int) -> AssocPoly:
    """log of a polynomial with constant term 1, truncated at the given word length."""
    if poly.get((), 0) != 1:
        raise ValueError("logarithm needs constant term 1")
    shifted = {w: c for w, c in poly.items() if w}
    result: AssocPoly = {}
    power: AssocPoly = {(): Fraction(1)}
    for k in range(1, degree + 1):
        power = assoc_mul(power, shifted, degree)
        if not power:
            break
        assoc_add(result, power, Fraction((-1) ** (k + 1), k))
    return result


def log_exp_product(a: FreeLieSeries, b: FreeLieSeries, degree: int) -> FreeLieSeries:
    """log(e^a e^b) up to and including the given degree."""
    if degree < 1:
        raise TruncationError("log_exp_product needs degree >= 1")
    if a.truncation_degree < degree or b.truncation_degree < degree:
        raise TruncationError(
            f"operands truncated at {a.truncation_degree}, {b.truncation_degree}; need {degree}"
        )
    pa = {w: c for w, c in a.to_associative().items() if len(w) <= degree}
    pb = {w: c for w, c in b.to_associative().items() if len(w) <= degree}
    product = assoc_mul(assoc_exp(pa, degree), assoc_exp(pb, degree), degree)
    return FreeLieSeries.from_associative(assoc_log(product, degree), degree)


@lru_cache(maxsize=None)
def _bch_cached(degree: int) -> FreeLieSeries:
    y1 = FreeLieSeries.generator(1, degree)
    y2 = FreeLieSeries.generator(2, degree)
    return log_exp_product(y1, y2, degree)


def bch_series(degree: int) -> FreeLieSeries:
    """Z(y1, y2) = log(e^{y1} e^{y2}) truncated at degree."""
    logger.debug("BCH series requested at degree %d", degree)
    return _bch_cached(degree)


def dynkin_defect(poly: AssocPoly) -> AssocPoly:
    """theta(p) - n p summed over homogeneous parts, with theta the right-normed bracketing.

    Vanishes exactly when every homogeneous part is a Lie polynomial.
    """
    defect: AssocPoly = {}
    for word, coefficient in poly.items():
        n = len(word)
        if n == 0:
            assoc_add(defect, {word: coefficient})
            continue
        assoc_add(defect, right_normed(word), coefficient)
        assoc_add(defect, {word: coefficient}, Fraction(-n))
    return defect


def is_primitive(poly: AssocPoly) -> bool:
    return not dynkin_defect(poly)


def _words_up_to(num_generators: int, degree: int) -> List[Word]:
    words: List[Word] = [()]
    layer: List[Word] = [()]
    for _ in range(degree):
        layer = [w + (a,) for w in layer for a in range(1, num_generators + 1)]
        words.extend(layer)
    return sorted(words, key=lambda w: (-len(w), w))


def left_multiplication_matrix(letter: int, degree: int, num_generators: int = 2) -> np.ndarray:
    """Matrix of w -> letter.w on words of length <= degree (longest words first).

    The ordering makes the matrix strictly upper triangular.
    """
    words = _words_up_to(num_generators, degree)
    index = {w: i for i, w in enumerate(words)}
    matrix = np.zeros((len(words), len(words)))
    for w, j in index.items():
        if len(w) < degree:
            matrix[index[(letter,) + w], j] = 1.0
    return matrix


def bch_matrix_oracle(degree: int) -> FreeLieSeries:
    """Independent floating-point BCH: matrix exponentials on the free nilpotent quotient."""
    if degree < 1:
        raise TruncationError("oracle needs degree >= 1")
    words = _words_up_to(2, degree)
    m1 = left_multiplication_matrix(1, degree)
    m2 = left_multiplication_matrix(2, degree)
    nilpotent = expm(m1) @ expm(m2) - np.eye(len(words))
    log_matrix = np.zeros_like(nilpotent)
    power = np.eye(len(words))
    for k in range(1, degree + 1):
        power = power @ nilpotent
        log_matrix += ((-1) ** (k + 1) / k) * power
    column = log_matrix[:, words.index(())]
    poly: AssocPoly = {}
    for w, value in zip(words, column):
        c = Fraction(float(value)).limit_denominator(10**6)
        if c and w:
            poly[w] = c
    return FreeLieSeries.from_associative(poly, degree)


def _ad_coefficient(kind: AdSeriesKind, k: int) -> Fraction:
    if kind is AdSeriesKind.ONE_MINUS_EXP_NEG_AD:
        return Fraction((-1) ** (k + 1), factorial(k))
    return Fraction(1, factorial(k))


def series_of_ad(
    kind: Union[AdSeriesKind, str],
    direction: FreeLieSeries,
    target: FreeLieSeries,
    degree: int,
) -> FreeLieSeries:
    """Apply sum_{k>=1} c_k ad(direction)^k to target.

    ``one_minus_exp_neg_ad`` is 1 - e^{-ad}, ``exp_ad_minus_one`` is e^{ad} - 1.
    """
    try:
        kind = AdSeriesKind(kind)
    except ValueError as exc:
        raise UnknownKind(f"unknown ad-series kind {kind!r}") from exc
    if degree < 1:
        raise TruncationError("series_of_ad needs degree >= 1")
    x = direction.truncate(degree)
    term = target.truncate(degree)
    total = FreeLieSeries.zero(min(x.truncation_degree, term.truncation_degree))
    for k in range(1, degree + 1):
        term = bracket(x, term)
        if term.is_zero():
            break
        total = total + term.scale(_ad_coefficient(kind, k))
    return total
