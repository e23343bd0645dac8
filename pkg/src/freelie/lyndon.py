"""Lyndon words, their standard bracketing and the associative expansion.

Words are tuples of letters 1..k. A Lie element is stored by its coordinates in
the basis of standard bracketings of Lyndon words; arithmetic goes through the
free associative algebra, where the expansion of the bracketing of w equals w
plus lexicographically larger words of the same length.
"""
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Tuple, Union

from sympy.ntheory import divisors, mobius

from src.errors import NotALieElement

Word = Tuple[int, ...]
BracketTree = Union[int, Tuple["BracketTree", "BracketTree"]]
AssocPoly = Dict[Word, Fraction]


def lyndon_words(num_generators: int, max_length: int) -> Iterator[Word]:
    """Yield every Lyndon word of length <= max_length in lexicographic order (Duval)."""
    if num_generators < 1 or max_length < 1:
        return
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(letter + 1 for letter in w)
        m = len(w)
        while len(w) < max_length:
            w.append(w[-m])
        while w and w[-1] == num_generators - 1:
            w.pop()


def is_lyndon(word: Word) -> bool:
    return len(word) > 0 and all(word < word[i:] + word[:i] for i in range(1, len(word)))


def lyndon_basis_words(num_generators: int, degree: int) -> List[Word]:
    return [w for w in lyndon_words(num_generators, degree) if len(w) == degree]


def witt_dimension(num_generators: int, degree: int) -> int:
    """Dimension of the degree-n part of the free Lie algebra on k generators."""
    total = sum(mobius(d) * num_generators ** (degree // d) for d in divisors(degree))
    return int(total) // degree


@lru_cache(maxsize=None)
def standard_factorization(word: Word) -> Tuple[Word, Word]:
    """Split a Lyndon word w = uv with v its longest proper Lyndon suffix."""
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise ValueError(f"{word} has no standard factorization")


@lru_cache(maxsize=None)
def bracket_tree(word: Word) -> BracketTree:
    if len(word) == 1:
        return word[0]
    u, v = standard_factorization(word)
    return (bracket_tree(u), bracket_tree(v))


def tree_word(tree: BracketTree) -> Word:
    if isinstance(tree, int):
        return (tree,)
    return tree_word(tree[0]) + tree_word(tree[1])


def render_tree(tree: BracketTree, names: Dict[int, str]) -> str:
    if isinstance(tree, int):
        return names[tree]
    return f"[{render_tree(tree[0], names)},{render_tree(tree[1], names)}]"


# Associative arithmetic ------------------------------------------------------

def assoc_add(target: AssocPoly, source: AssocPoly, scale: Fraction = Fraction(1)) -> None:
    for word, coefficient in source.items():
        value = target.get(word, 0) + scale * coefficient
        if value:
            target[word] = value
        else:
            target.pop(word, None)


def assoc_mul(left: AssocPoly, right: AssocPoly, degree: int) -> AssocPoly:
    """Concatenation product, dropping words longer than degree."""
    by_length: Dict[int, List[Tuple[Word, Fraction]]] = {}
    for word, coefficient in right.items():
        by_length.setdefault(len(word), []).append((word, coefficient))
    out: AssocPoly = {}
    for u, a in left.items():
        room = degree - len(u)
        for length, items in by_length.items():
            if length > room:
                continue
            for v, b in items:
                key = u + v
                value = out.get(key, 0) + a * b
                if value:
                    out[key] = value
                else:
                    out.pop(key, None)
    return out


def assoc_commutator(left: AssocPoly, right: AssocPoly, degree: int) -> AssocPoly:
    out = assoc_mul(left, right, degree)
    assoc_add(out, assoc_mul(right, left, degree), Fraction(-1))
    return out


@lru_cache(maxsize=None)
def _expansion_items(word: Word) -> Tuple[Tuple[Word, int], ...]:
    if len(word) == 1:
        return ((word, 1),)
    u, v = standard_factorization(word)
    pu = {w: Fraction(c) for w, c in _expansion_items(u)}
    pv = {w: Fraction(c) for w, c in _expansion_items(v)}
    expanded = assoc_commutator(pu, pv, len(word))
    return tuple(sorted((w, int(c)) for w, c in expanded.items()))


def lyndon_expansion(word: Word) -> AssocPoly:
    """Associative polynomial of the standard bracketing of a Lyndon word."""
    return {w: Fraction(c) for w, c in _expansion_items(word)}


def to_associative(coordinates: Dict[Word, Fraction]) -> AssocPoly:
    out: AssocPoly = {}
    for word, coefficient in coordinates.items():
        assoc_add(out, lyndon_expansion(word), coefficient)
    return out


def from_associative(poly: AssocPoly) -> Dict[Word, Fraction]:
    """Rewrite a Lie polynomial in Lyndon coordinates by peeling leading words."""
    remaining = dict(poly)
    coordinates: Dict[Word, Fraction] = {}
    while remaining:
        word = min(remaining, key=lambda w: (len(w), w))
        coefficient = remaining[word]
        if not is_lyndon(word):
            raise NotALieElement(f"leading word {word} is not Lyndon; input is not a Lie polynomial")
        coordinates[word] = coefficient
        assoc_add(remaining, lyndon_expansion(word), -coefficient)
    return coordinates


@lru_cache(maxsize=None)
def _bracket_items(left: Word, right: Word) -> Tuple[Tuple[Word, Fraction], ...]:
    degree = len(left) + len(right)
    product = assoc_commutator(lyndon_expansion(left), lyndon_expansion(right), degree)
    return tuple(sorted(from_associative(product).items()))


def lyndon_bracket(left: Word, right: Word) -> Dict[Word, Fraction]:
    """Lyndon coordinates of the bracket of two basis elements."""
    return dict(_bracket_items(left, right))


def right_normed(word: Word) -> AssocPoly:
    """Associative expansion of [a1,[a2,[...,an]]]."""
    if len(word) == 1:
        return {word: Fraction(1)}
    rest = right_normed(word[1:])
    return assoc_commutator({word[:1]: Fraction(1)}, rest, len(word))
