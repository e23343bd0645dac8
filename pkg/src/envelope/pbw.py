"""Enveloping algebra elements in PBW normal form, and the symmetrization map."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Optional, Sequence, Tuple, Union

from sympy.utilities.iterables import multiset_permutations

from src.liealg.algebra import LieAlgebra
from src.liealg.sympoly import SymPoly
from src.types import RewriteStrategy

logger = logging.getLogger(__name__)

IndexWord = Tuple[int, ...]


def _is_sorted(word: IndexWord) -> bool:
    return all(word[p] <= word[p + 1] for p in range(len(word) - 1))


@dataclass(frozen=True)
class EnvElement:
    """Element of U(g) as a combination of weakly increasing index words."""
    algebra: LieAlgebra
    terms: Dict[IndexWord, Fraction]

    def __post_init__(self):
        cleaned = {}
        for word, c in self.terms.items():
            if not _is_sorted(word):
                raise ValueError(f"{word} is not PBW ordered")
            if c != 0:
                cleaned[tuple(word)] = Fraction(c)
        object.__setattr__(self, "terms", cleaned)

    __hash__ = None  # type: ignore[assignment]

    def __eq__(self, other):
        if not isinstance(other, EnvElement):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    @classmethod
    def one(cls, algebra: LieAlgebra) -> "EnvElement":
        return cls(algebra, {(): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __add__(self, other: "EnvElement") -> "EnvElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return EnvElement(self.algebra, out)

    def __neg__(self) -> "EnvElement":
        return self.scale(-1)

    def __sub__(self, other: "EnvElement") -> "EnvElement":
        return self + (-other)

    def scale(self, factor) -> "EnvElement":
        factor = Fraction(factor)
        return EnvElement(self.algebra, {w: factor * c for w, c in self.terms.items()})

    def __mul__(self, other: "EnvElement") -> "EnvElement":
        out: Dict[IndexWord, Fraction] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                for w, c in _reduce(self.algebra, u + v, RewriteStrategy.LEFTMOST):
                    out[w] = out.get(w, 0) + a * b * c
        return EnvElement(self.algebra, out)

    def to_symbols(self) -> SymPoly:
        """Read PBW words as commutative monomials (the inverse of sorting)."""
        out: Dict[Tuple[int, ...], Fraction] = {}
        for w, c in self.terms.items():
            exponents = [0] * self.algebra.dim
            for letter in w:
                exponents[letter] += 1
            out[tuple(exponents)] = out.get(tuple(exponents), 0) + c
        return SymPoly(self.algebra.dim, out)

    def to_text(self) -> str:
        return self.to_symbols().to_text()


def _descent(word: IndexWord, strategy: RewriteStrategy) -> Optional[int]:
    positions = range(len(word) - 1)
    if strategy is RewriteStrategy.RIGHTMOST:
        positions = reversed(positions)
    for p in positions:
        if word[p] > word[p + 1]:
            return p
    return None


@lru_cache(maxsize=200_000)
def _reduce(g: LieAlgebra, word: IndexWord, strategy: RewriteStrategy) -> Tuple[Tuple[IndexWord, Fraction], ...]:
    p = _descent(word, strategy)
    if p is None:
        return ((word, Fraction(1)),)
    j, i = word[p], word[p + 1]
    out: Dict[IndexWord, Fraction] = {}
    pieces = [(word[:p] + (i, j) + word[p + 2:], Fraction(1))]
    for k, c in g.bracket_of_basis(j, i).items():
        pieces.append((word[:p] + (k,) + word[p + 2:], c))
    for piece, scale in pieces:
        for w, c in _reduce(g, piece, strategy):
            out[w] = out.get(w, 0) + scale * c
    return tuple(sorted((w, c) for w, c in out.items() if c != 0))


def pbw_reduce(
    g: LieAlgebra,
    word: Sequence[int],
    strategy: Union[RewriteStrategy, str] = RewriteStrategy.LEFTMOST,
) -> EnvElement:
    """Normal form of x_{w1} ... x_{wk} by rewriting x_j x_i -> x_i x_j + [x_j, x_i] for j > i."""
    word = tuple(word)
    if any(not 0 <= a < g.dim for a in word):
        raise ValueError(f"index out of range in {word} for dimension {g.dim}")
    return EnvElement(g, dict(_reduce(g, word, RewriteStrategy(strategy))))


@lru_cache(maxsize=20_000)
def _symmetrized_monomial(g: LieAlgebra, exponents: Tuple[int, ...]) -> Tuple[Tuple[IndexWord, Fraction], ...]:
    letters = [i for i, k in enumerate(exponents) for _ in range(k)]
    count = factorial(len(letters))
    for k in exponents:
        count //= factorial(k)
    out: Dict[IndexWord, Fraction] = {}
    for ordering in multiset_permutations(letters):
        for w, c in _reduce(g, tuple(ordering), RewriteStrategy.LEFTMOST):
            out[w] = out.get(w, 0) + c
    return tuple(sorted((w, c / count) for w, c in out.items() if c != 0))


def symmetrize(g: LieAlgebra, f: SymPoly) -> EnvElement:
    """Average of all orderings of each monomial, reduced to PBW form."""
    if f.nvars != g.dim:
        raise ValueError(f"polynomial in {f.nvars} variables on a {g.dim}-dimensional algebra")
    out: Dict[IndexWord, Fraction] = {}
    for exponents, a in f.terms.items():
        for w, c in _symmetrized_monomial(g, exponents):
            out[w] = out.get(w, 0) + a * c
    return EnvElement(g, out)


def unsymmetrize(g: LieAlgebra, element: EnvElement) -> SymPoly:
    """Inverse of symmetrize, peeling off the top-degree part one degree at a time."""
    remaining = element
    result = SymPoly.zero(g.dim)
    while not remaining.is_zero():
        top = remaining.degree()
        leading = EnvElement(g, {w: c for w, c in remaining.terms.items() if len(w) == top}).to_symbols()
        result = result + leading
        remaining = remaining - symmetrize(g, leading)
    return result
