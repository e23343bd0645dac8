"""Substitutions, directional derivatives and tangential derivations of lie(y1, y2)."""
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Union

from src.freelie.lyndon import BracketTree, bracket_tree
from src.freelie.series import FreeLieSeries, bracket

Replacements = Union[Mapping[int, FreeLieSeries], Sequence[FreeLieSeries]]


def _as_mapping(replacements: Replacements) -> Dict[int, FreeLieSeries]:
    if isinstance(replacements, Mapping):
        return dict(replacements)
    return {i + 1: r for i, r in enumerate(replacements)}


def _working_degree(s: FreeLieSeries, images: Dict[int, FreeLieSeries], degree: int) -> int:
    return min([degree, s.truncation_degree] + [r.truncation_degree for r in images.values()])


def _evaluate_tree(tree: BracketTree, images: Dict[int, FreeLieSeries], degree: int) -> FreeLieSeries:
    if isinstance(tree, int):
        image = images.get(tree)
        return FreeLieSeries.zero(degree) if image is None else image.truncate(degree)
    return bracket(_evaluate_tree(tree[0], images, degree), _evaluate_tree(tree[1], images, degree))


def substitute(s: FreeLieSeries, images: Replacements, degree: Optional[int] = None) -> FreeLieSeries:
    """Homomorphic image of s under y_i -> images[i]; missing generators map to 0."""
    images = _as_mapping(images)
    degree = _working_degree(s, images, degree if degree is not None else s.truncation_degree)
    total = FreeLieSeries.zero(degree)
    for word, c in s.terms.items():
        total = total + _evaluate_tree(bracket_tree(word), images, degree).scale(c)
    return total


def _derive_tree(
    tree: BracketTree,
    replacements: Dict[int, FreeLieSeries],
    identity: Dict[int, FreeLieSeries],
    degree: int,
) -> FreeLieSeries:
    if isinstance(tree, int):
        image = replacements.get(tree)
        return FreeLieSeries.zero(degree) if image is None else image.truncate(degree)
    left, right = tree
    d_left = _derive_tree(left, replacements, identity, degree)
    d_right = _derive_tree(right, replacements, identity, degree)
    out = FreeLieSeries.zero(degree)
    if not d_left.is_zero():
        out = out + bracket(d_left, _evaluate_tree(right, identity, degree))
    if not d_right.is_zero():
        out = out + bracket(_evaluate_tree(left, identity, degree), d_right)
    return out


def directional_substitute(s: FreeLieSeries, replacements: Replacements, degree: int) -> FreeLieSeries:
    """Sum over single occurrences of y_i in s replaced by replacements[i].

    This is the derivation <v, d/dy_i> acting on s. Generators without a
    replacement are left alone.
    """
    replacements = _as_mapping(replacements)
    degree = _working_degree(s, replacements, degree)
    identity = {i: FreeLieSeries.generator(i, degree) for i in range(1, s.num_generators + 1)}
    total = FreeLieSeries.zero(degree)
    for word, c in s.terms.items():
        total = total + _derive_tree(bracket_tree(word), replacements, identity, degree).scale(c)
    return total


@dataclass(frozen=True)
class TangentialDerivation:
    """Derivation u of lie(y1, y2) with u(y_i) = [y_i, u_i]."""
    u1: FreeLieSeries
    u2: FreeLieSeries

    __hash__ = None  # type: ignore[assignment]

    @property
    def truncation_degree(self) -> int:
        return min(self.u1.truncation_degree, self.u2.truncation_degree)

    def images(self) -> Dict[int, FreeLieSeries]:
        degree = self.truncation_degree
        return {
            1: bracket(FreeLieSeries.generator(1, degree), self.u1),
            2: bracket(FreeLieSeries.generator(2, degree), self.u2),
        }

    def __call__(self, s: FreeLieSeries) -> FreeLieSeries:
        return apply_tangential(self, s)


def apply_tangential(u: TangentialDerivation, s: FreeLieSeries) -> FreeLieSeries:
    return directional_substitute(s, u.images(), min(s.truncation_degree, u.truncation_degree))
