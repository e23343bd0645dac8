"""Truncated series in the free Lie algebra on y1, y2 with rational coefficients."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Union

import pyparsing as pp

from src.errors import ParseError, TruncationError
from src.freelie.lyndon import (
    AssocPoly,
    Word,
    bracket_tree,
    from_associative,
    is_lyndon,
    lyndon_basis_words,
    lyndon_bracket,
    render_tree,
    to_associative,
)
from src.types import GENERATOR_NAMES

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


def _clean(terms: Dict[Word, Fraction]) -> Dict[Word, Fraction]:
    return {w: Fraction(c) for w, c in terms.items() if c != 0}


def format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class FreeLieSeries:
    """Element of lie(y1, y2) known up to and including degree ``truncation_degree``.

    Keys of ``terms`` are Lyndon words; the word w stands for its standard
    bracketing. Zero coefficients are dropped on construction.
    """
    terms: Dict[Word, Fraction]
    truncation_degree: int
    num_generators: int = 2

    def __post_init__(self):
        if self.truncation_degree < 1:
            raise TruncationError(f"truncation degree must be positive, got {self.truncation_degree}")
        cleaned = _clean(self.terms)
        for word in cleaned:
            if not is_lyndon(word) or any(not 1 <= a <= self.num_generators for a in word):
                raise ValueError(f"{word} is not a Lyndon word on {self.num_generators} letters")
            if len(word) > self.truncation_degree:
                raise TruncationError(
                    f"term {word} has degree {len(word)} above truncation {self.truncation_degree}"
                )
        object.__setattr__(self, "terms", cleaned)

    __hash__ = None  # type: ignore[assignment]

    def __eq__(self, other):
        if not isinstance(other, FreeLieSeries):
            return NotImplemented
        return self.truncation_degree == other.truncation_degree and self.terms == other.terms

    # Constructors -------------------------------------------------------

    @classmethod
    def zero(cls, truncation_degree: int) -> "FreeLieSeries":
        return cls({}, truncation_degree)

    @classmethod
    def generator(cls, index: int, truncation_degree: int) -> "FreeLieSeries":
        return cls({(index,): Fraction(1)}, truncation_degree)

    @classmethod
    def from_associative(cls, poly: AssocPoly, truncation_degree: int) -> "FreeLieSeries":
        kept = {w: c for w, c in poly.items() if len(w) <= truncation_degree}
        return cls(from_associative(kept), truncation_degree)

    # Inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> List[int]:
        return sorted({len(w) for w in self.terms})

    def homogeneous(self, degree: int) -> "FreeLieSeries":
        return FreeLieSeries(
            {w: c for w, c in self.terms.items() if len(w) == degree}, self.truncation_degree
        )

    def coefficient(self, word: Word) -> Fraction:
        return self.terms.get(tuple(word), Fraction(0))

    def to_associative(self) -> AssocPoly:
        return to_associative(self.terms)

    def truncate(self, degree: int) -> "FreeLieSeries":
        degree = min(degree, self.truncation_degree)
        return FreeLieSeries({w: c for w, c in self.terms.items() if len(w) <= degree}, degree)

    def with_truncation(self, degree: int) -> "FreeLieSeries":
        """Reinterpret the stored polynomial at another truncation degree.

        Terms above the new degree are dropped; raising the degree treats the
        series as an exact polynomial.
        """
        return FreeLieSeries({w: c for w, c in self.terms.items() if len(w) <= degree}, degree)

    # Arithmetic ---------------------------------------------------------

    def _combine(self, other: "FreeLieSeries", sign: int) -> "FreeLieSeries":
        degree = min(self.truncation_degree, other.truncation_degree)
        out = {w: c for w, c in self.terms.items() if len(w) <= degree}
        for w, c in other.terms.items():
            if len(w) <= degree:
                out[w] = out.get(w, 0) + sign * c
        return FreeLieSeries(out, degree)

    def __add__(self, other: "FreeLieSeries") -> "FreeLieSeries":
        return self._combine(other, 1)

    def __sub__(self, other: "FreeLieSeries") -> "FreeLieSeries":
        return self._combine(other, -1)

    def __neg__(self) -> "FreeLieSeries":
        return self.scale(-1)

    def scale(self, factor: Scalar) -> "FreeLieSeries":
        factor = Fraction(factor)
        return FreeLieSeries({w: factor * c for w, c in self.terms.items()}, self.truncation_degree)

    def __rmul__(self, factor: Scalar) -> "FreeLieSeries":
        return self.scale(factor)

    def bracket(self, other: "FreeLieSeries") -> "FreeLieSeries":
        return bracket(self, other)

    # Text ---------------------------------------------------------------

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for i, (word, c) in enumerate(sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))):
            monomial = render_tree(bracket_tree(word), GENERATOR_NAMES)
            magnitude = abs(c)
            body = monomial if magnitude == 1 else f"{format_coefficient(magnitude)} {monomial}"
            if i == 0:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        return "".join(pieces)

    def __str__(self) -> str:
        return self.to_text()


def bracket(a: FreeLieSeries, b: FreeLieSeries) -> FreeLieSeries:
    """Lie bracket, truncated to the smaller of the two truncation degrees."""
    degree = min(a.truncation_degree, b.truncation_degree)
    out: Dict[Word, Fraction] = {}
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            if len(u) + len(v) > degree:
                continue
            for w, c in lyndon_bracket(u, v).items():
                out[w] = out.get(w, 0) + cu * cv * c
    return FreeLieSeries(out, degree)


def lyndon_basis(num_generators: int, degree: int) -> List[FreeLieSeries]:
    """Basis of the degree-n part of the free Lie algebra, in lexicographic order."""
    return [
        FreeLieSeries({w: Fraction(1)}, degree, num_generators)
        for w in lyndon_basis_words(num_generators, degree)
    ]


# Parsing ----------------------------------------------------------------

@dataclass
class _Leaf:
    index: int


@dataclass
class _Node:
    left: object
    right: object


@dataclass
class _Term:
    sign: int
    coefficient: Fraction
    monomial: object


def _monomial_degree(node) -> int:
    if isinstance(node, _Leaf):
        return 1
    return _monomial_degree(node.left) + _monomial_degree(node.right)


def _build_grammar():
    names = {name: index for index, name in GENERATOR_NAMES.items()}
    generator = pp.one_of(list(names)).set_parse_action(lambda t: _Leaf(names[t[0]]))
    monomial = pp.Forward()
    pair = pp.Suppress("[") + monomial + pp.Suppress(",") + monomial + pp.Suppress("]")
    pair.set_parse_action(lambda t: _Node(t[0], t[1]))
    monomial <<= generator | pair
    rational = pp.Regex(r"\d+(/\d+)?").set_parse_action(lambda t: Fraction(t[0]))
    sign = pp.one_of("+ -")

    def make_term(tokens):
        items = list(tokens)
        s = -1 if items and items[0] == "-" else 1
        if items and items[0] in ("+", "-"):
            items = items[1:]
        coefficient = items[0] if len(items) == 2 else Fraction(1)
        return _Term(s, coefficient, items[-1])

    first = (pp.Opt(pp.Literal("-")) + pp.Opt(rational) + monomial).set_parse_action(make_term)
    other = (sign + pp.Opt(rational) + monomial).set_parse_action(make_term)
    zero = pp.Literal("0").set_parse_action(lambda t: [])
    return ((zero | (first + pp.ZeroOrMore(other))) + pp.StringEnd())


_GRAMMAR = _build_grammar()


def _evaluate(node, degree: int) -> FreeLieSeries:
    if isinstance(node, _Leaf):
        return FreeLieSeries.generator(node.index, degree)
    return bracket(_evaluate(node.left, degree), _evaluate(node.right, degree))


def parse_series(text: str, truncation_degree: Optional[int] = None) -> FreeLieSeries:
    """Read the canonical text form back into a series.

    Any bracket monomial over y1, y2 is accepted, not only Lyndon bracketings.
    Without ``truncation_degree`` the highest degree present is used.
    """
    try:
        terms = list(_GRAMMAR.parse_string(text.strip(), parse_all=True))
    except pp.ParseException as exc:
        raise ParseError(f"cannot parse Lie series {text!r}: {exc}") from exc
    highest = max((_monomial_degree(t.monomial) for t in terms), default=1)
    degree = truncation_degree if truncation_degree is not None else highest
    if highest > degree:
        raise TruncationError(f"series has degree {highest} terms but truncation {degree}")
    total = FreeLieSeries.zero(degree)
    for term in terms:
        total = total + _evaluate(term.monomial, degree).scale(term.sign * term.coefficient)
    return total
