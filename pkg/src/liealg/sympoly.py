"""Commutative polynomials with rational coefficients."""
import re
from dataclasses import dataclass
from fractions import Fraction
from tokenize import TokenError
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple, Union

import sympy as sp
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)
from sympy.polys.polyerrors import CoercionFailed, PolynomialError

from src.errors import ParseError

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


def _format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _weight(exponents: Exponents, counted: Optional[Sequence[int]]) -> int:
    if counted is None:
        return sum(exponents)
    return sum(exponents[i] for i in counted)


@dataclass(frozen=True)
class SymPoly:
    """Polynomial in ``nvars`` commuting variables, keyed by exponent tuples.

    Truncated operations take ``degree`` together with ``counted``, the
    variables whose exponents make up the degree (all of them by default).
    """
    nvars: int
    terms: Dict[Exponents, Fraction]

    def __post_init__(self):
        cleaned = {}
        for exponents, c in self.terms.items():
            if len(exponents) != self.nvars:
                raise ValueError(f"exponent tuple {exponents} does not have {self.nvars} entries")
            if c != 0:
                cleaned[tuple(exponents)] = Fraction(c)
        object.__setattr__(self, "terms", cleaned)

    __hash__ = None  # type: ignore[assignment]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SymPoly.constant(other, self.nvars)
        if not isinstance(other, SymPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    # Constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "SymPoly":
        return cls(nvars, {})

    @classmethod
    def constant(cls, value: Scalar, nvars: int) -> "SymPoly":
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def variable(cls, index: int, nvars: int) -> "SymPoly":
        exponents = [0] * nvars
        exponents[index] = 1
        return cls(nvars, {tuple(exponents): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coefficient: Scalar = 1) -> "SymPoly":
        return cls(len(exponents), {tuple(exponents): Fraction(coefficient)})

    # Inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self, counted: Optional[Sequence[int]] = None) -> int:
        return max((_weight(e, counted) for e in self.terms), default=0)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exponents), Fraction(0))

    def homogeneous(self, degree: int, counted: Optional[Sequence[int]] = None) -> "SymPoly":
        return SymPoly(self.nvars, {e: c for e, c in self.terms.items() if _weight(e, counted) == degree})

    def truncate(self, degree: int, counted: Optional[Sequence[int]] = None) -> "SymPoly":
        return SymPoly(self.nvars, {e: c for e, c in self.terms.items() if _weight(e, counted) <= degree})

    # Arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "SymPoly":
        if isinstance(other, SymPoly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return SymPoly.constant(other, self.nvars)

    def __add__(self, other) -> "SymPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return SymPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "SymPoly":
        return self.scale(-1)

    def __sub__(self, other) -> "SymPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SymPoly":
        return self._coerce(other) - self

    def scale(self, factor: Scalar) -> "SymPoly":
        factor = Fraction(factor)
        return SymPoly(self.nvars, {e: factor * c for e, c in self.terms.items()})

    def mul(self, other, degree: Optional[int] = None, counted: Optional[Sequence[int]] = None) -> "SymPoly":
        """Product, dropping monomials whose counted degree exceeds ``degree``."""
        if not isinstance(other, SymPoly):
            return self.scale(other)
        other = self._coerce(other)
        out: Dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            w1 = _weight(e1, counted)
            if degree is not None and w1 > degree:
                continue
            for e2, c2 in other.terms.items():
                if degree is not None and w1 + _weight(e2, counted) > degree:
                    continue
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, 0) + c1 * c2
        return SymPoly(self.nvars, out)

    def __mul__(self, other) -> "SymPoly":
        return self.mul(other)

    def __rmul__(self, other) -> "SymPoly":
        return self.mul(other)

    def power(self, exponent: int, degree: Optional[int] = None, counted: Optional[Sequence[int]] = None) -> "SymPoly":
        result = SymPoly.constant(1, self.nvars)
        for _ in range(exponent):
            result = result.mul(self, degree, counted)
        return result

    def derivative(self, index: int) -> "SymPoly":
        out: Dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            if e[index]:
                key = e[:index] + (e[index] - 1,) + e[index + 1:]
                out[key] = out.get(key, 0) + c * e[index]
        return SymPoly(self.nvars, out)

    def substitute(
        self,
        images: Sequence["SymPoly"],
        degree: Optional[int] = None,
        counted: Optional[Sequence[int]] = None,
    ) -> "SymPoly":
        """Compose with variable i -> images[i]; images share their own variable set."""
        if len(images) != self.nvars:
            raise ValueError("one image per variable is required")
        target = images[0].nvars if images else 0
        powers: Dict[Tuple[int, int], SymPoly] = {}

        def power_of(i: int, k: int) -> SymPoly:
            if (i, k) not in powers:
                powers[(i, k)] = images[i].power(k, degree, counted)
            return powers[(i, k)]

        total = SymPoly.zero(target)
        for e, c in self.terms.items():
            term = SymPoly.constant(c, target)
            for i, k in enumerate(e):
                if k:
                    term = term.mul(power_of(i, k), degree, counted)
            total = total + term
        return total

    def map_coefficients(self, fn: Callable[[Exponents, Fraction], Fraction]) -> "SymPoly":
        return SymPoly(self.nvars, {e: fn(e, c) for e, c in self.terms.items()})

    def evaluate(self, point: Sequence):
        """Value at a point; the arithmetic follows the point's number type."""
        exact = all(isinstance(x, (int, Fraction)) for x in point)
        total = Fraction(0) if exact else 0.0
        for e, c in self.terms.items():
            value = c if exact else float(c)
            for x, k in zip(point, e):
                if k:
                    value = value * x ** k
            total = total + value
        return total

    # Text ---------------------------------------------------------------

    def sorted_terms(self) -> Iterable[Tuple[Exponents, Fraction]]:
        return sorted(self.terms.items(), key=lambda item: (sum(item[0]), tuple(-k for k in item[0])))

    def to_text(self, names: Optional[Sequence[str]] = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{i}" for i in range(self.nvars)]
        pieces = []
        for n, (e, c) in enumerate(self.sorted_terms()):
            factors = [names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k]
            monomial = "*".join(factors)
            magnitude = abs(c)
            if not monomial:
                body = _format_coefficient(magnitude)
            elif magnitude == 1:
                body = monomial
            else:
                body = f"{_format_coefficient(magnitude)} {monomial}"
            if n == 0:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        return "".join(pieces)

    def __str__(self) -> str:
        return self.to_text()


_VARIABLE = re.compile(r"x(\d+)")
_TRANSFORMATIONS = standard_transformations + (implicit_multiplication, convert_xor)


def parse_polynomial(text: str, nvars: int) -> SymPoly:
    """Read an expression in x0..x{nvars-1} with rational coefficients and + - * ^.

    Juxtaposition multiplies, so the output of ``SymPoly.to_text`` reads back.
    """
    if nvars < 1:
        raise ValueError("a polynomial ring needs at least one variable")
    try:
        expr = parse_expr(text, transformations=_TRANSFORMATIONS, evaluate=True)
    except (SyntaxError, TokenError, TypeError, ValueError, sp.SympifyError) as exc:
        raise ParseError(f"cannot parse polynomial {text!r}: {exc}") from exc
    symbols = [sp.Symbol(f"x{i}") for i in range(nvars)]
    for symbol in expr.free_symbols:
        match = _VARIABLE.fullmatch(symbol.name)
        if match is None or int(match.group(1)) >= nvars:
            raise ParseError(f"{symbol.name} is not a variable x0..x{nvars - 1}")
    try:
        poly = sp.Poly(expr, *symbols, domain="QQ")
    except (PolynomialError, CoercionFailed) as exc:
        raise ParseError(f"{text!r} is not a polynomial with rational coefficients") from exc
    terms = {}
    for exponents, c in poly.terms():
        c = sp.Rational(c)
        terms[tuple(exponents)] = Fraction(int(c.p), int(c.q))
    return SymPoly(nvars, terms)
