"""Tests for PBW normal ordering, the Duflo map and the star product."""
import random
from fractions import Fraction
from itertools import product

import pytest

from src.envelope import (
    EnvElement,
    duflo_density,
    duflo_iso,
    duflo_iso_inverse,
    duflo_operator,
    exp_identity_defect,
    exp_star_expand,
    pbw_reduce,
    star,
    star_scaled,
    symmetrize,
    unsymmetrize,
)
from src.envelope.expseries import monomials_up_to
from src.liealg import SymPoly, builtin_lie_algebra

ALGEBRAS = ("sl2", "heis3", "aff1", "gl2")


def x(i, dim):
    return SymPoly.variable(i, dim)


def random_poly(rng, dim, max_degree=4, terms=5):
    out = SymPoly.zero(dim)
    for _ in range(terms):
        exponents = [0] * dim
        for _ in range(rng.randint(0, max_degree)):
            exponents[rng.randrange(dim)] += 1
        out = out + SymPoly.monomial(exponents, Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
    return out


def test_pbw_reduce_examples():
    abelian = builtin_lie_algebra("abelian")
    assert pbw_reduce(abelian, (2, 0, 1)).terms == {(0, 1, 2): 1}
    sl2 = builtin_lie_algebra("sl2")
    assert pbw_reduce(sl2, (1, 0)).terms == {(0, 1): 1, (2,): -1}, "f e = e f - h"


def test_pbw_reduction_is_confluent():
    g = builtin_lie_algebra("sl2")
    for length in range(1, 5):
        for word in product(range(3), repeat=length):
            left = pbw_reduce(g, word, "leftmost")
            right = pbw_reduce(g, word, "rightmost")
            assert left == right, f"rewrite order changes the normal form of {word}"


def test_symmetrize_examples():
    g = builtin_lie_algebra("sl2")
    assert symmetrize(g, x(2, 3)) == pbw_reduce(g, (2,))
    expected = (pbw_reduce(g, (1, 2)) + pbw_reduce(g, (2, 1))).scale(Fraction(1, 2))
    assert symmetrize(g, x(1, 3) * x(2, 3)) == expected
    with pytest.raises(ValueError):
        symmetrize(g, SymPoly.variable(3, 4))
    with pytest.raises(ValueError):
        symmetrize(g, SymPoly.variable(0, 2))


@pytest.mark.parametrize("name", ["sl2", "heis3"])
def test_unsymmetrize_inverts_symmetrize(name):
    g = builtin_lie_algebra(name)
    rng = random.Random(2)
    for _ in range(15):
        f = random_poly(rng, g.dim)
        assert unsymmetrize(g, symmetrize(g, f)) == f


def test_duflo_operator_examples():
    aff1 = builtin_lie_algebra("aff1")
    assert duflo_operator(aff1, SymPoly.constant(1, 2)) == 1
    assert duflo_operator(aff1, x(0, 2)) == x(0, 2) - Fraction(1, 4)
    sl2 = builtin_lie_algebra("sl2")
    linear = x(0, 3).scale(3) + x(2, 3) - 7
    assert duflo_operator(sl2, linear) == linear


def test_duflo_iso_examples():
    sl2 = builtin_lie_algebra("sl2")
    assert duflo_iso(sl2, SymPoly.constant(1, 3)) == EnvElement.one(sl2)
    for i in range(3):
        assert duflo_iso(sl2, x(i, 3)) == pbw_reduce(sl2, (i,))


@pytest.mark.parametrize("name", ["heis3", "sl2", "aff1"])
def test_duflo_iso_round_trip(name):
    g = builtin_lie_algebra(name)
    rng = random.Random(9)
    for _ in range(10):
        f = random_poly(rng, g.dim)
        assert duflo_iso_inverse(g, duflo_iso(g, f)) == f
        element = symmetrize(g, f)
        assert duflo_iso(g, duflo_iso_inverse(g, element)) == element


def test_star_unit_and_sl2_value():
    sl2 = builtin_lie_algebra("sl2")
    f = x(0, 3) * x(2, 3) + x(1, 3).scale(2)
    assert star(sl2, SymPoly.constant(1, 3), f) == f
    assert star(sl2, f, SymPoly.constant(1, 3)) == f
    value = star(sl2, x(0, 3), x(1, 3))
    assert value == x(0, 3) * x(1, 3) + x(2, 3).scale(Fraction(1, 2)) - Fraction(1, 6)
    assert value.to_text() == "-1/6 + 1/2 x2 + x0*x1"


@pytest.mark.parametrize("name", ALGEBRAS)
def test_star_commutator_law(name):
    g = builtin_lie_algebra(name)
    for i in range(g.dim):
        for j in range(g.dim):
            commutator = star(g, x(i, g.dim), x(j, g.dim)) - star(g, x(j, g.dim), x(i, g.dim))
            expected = SymPoly.zero(g.dim)
            for k, c in g.bracket_of_basis(i, j).items():
                expected = expected + x(k, g.dim).scale(c)
            assert commutator == expected, f"[x{i}, x{j}] wrong on {name}"


@pytest.mark.parametrize("name", ["sl2", "heis3", "aff1"])
def test_star_is_associative(name):
    g = builtin_lie_algebra(name)
    nonconstant = [m for m in monomials_up_to(g.dim, 2) if sum(m)]
    for a, b, c in product(nonconstant, repeat=3):
        if sum(a) + sum(b) + sum(c) > 4:
            continue
        fa, fb, fc = SymPoly.monomial(a), SymPoly.monomial(b), SymPoly.monomial(c)
        left = star(g, star(g, fa, fb), fc)
        right = star(g, fa, star(g, fb, fc))
        assert left == right, f"associativity fails on {name} for {a}, {b}, {c}"


def test_star_scaled_examples():
    sl2 = builtin_lie_algebra("sl2")
    f1, f2 = x(0, 3) * x(2, 3), x(1, 3) + x(2, 3)
    assert star_scaled(sl2, 0, f1, f2) == f1 * f2
    assert star_scaled(sl2, 1, f1, f2) == star(sl2, f1, f2)
    half = star_scaled(sl2, Fraction(1, 2), x(0, 3), x(1, 3))
    assert half.coefficient((1, 1, 0)) == 1
    assert half.coefficient((0, 0, 1)) == Fraction(1, 4)
    assert half.constant_term() == Fraction(-1, 24)


def test_exp_identity_abelian_is_plain_exponential():
    g = builtin_lie_algebra("abelian2")
    order = 3
    star_side = exp_star_expand(g, order)
    assert star_side == duflo_density(g, order)
    for alpha in monomials_up_to(2, order):
        for beta in monomials_up_to(2, order - sum(alpha)):
            total = tuple(a + b for a, b in zip(alpha, beta))
            weight = Fraction(1)
            for k in alpha + beta:
                for m in range(2, k + 1):
                    weight /= m
            assert star_side.component(alpha, beta) == SymPoly.monomial(total, weight)


@pytest.mark.parametrize("name,order", [("aff1", 2), ("sl2", 3), ("heis3", 3), ("aff1", 3), ("gl2", 2)])
def test_exp_identity_holds(name, order):
    defect = exp_identity_defect(builtin_lie_algebra(name), order)
    assert defect.is_zero(), f"e^u * e^v != D e^Z on {name} at order {order}"


@pytest.mark.slow
@pytest.mark.parametrize("name", ["sl2", "gl2", "aff1", "heis3"])
def test_exp_identity_holds_at_order_four(name):
    assert exp_identity_defect(builtin_lie_algebra(name), 4).is_zero()


@pytest.mark.parametrize("name", ["sl2", "aff1"])
@pytest.mark.parametrize("t", [Fraction(1, 2), Fraction(1, 3)])
def test_scaled_exp_identity(name, t):
    defect = exp_identity_defect(builtin_lie_algebra(name), 3, t)
    assert defect.is_zero(), f"scaled identity fails on {name} at t = {t}"


def test_exp_series_components_are_star_products():
    g = builtin_lie_algebra("sl2")
    series = exp_star_expand(g, 2)
    assert series.component((1, 0, 0), (0, 1, 0)) == star(g, x(0, 3), x(1, 3))
    assert series.component((0, 0, 0), (0, 0, 0)) == 1
