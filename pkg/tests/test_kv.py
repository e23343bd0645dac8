"""Tests for the KV equations, the solver, the t-flow identities and the homotopy formula."""
import random
from fractions import Fraction

import pytest
import sympy as sp

from src.envelope.expseries import monomials_up_to
from src.errors import OrderCap, ParseError, TruncationError
from src.freelie import FreeLieSeries, TangentialDerivation
from src.freelie.lyndon import lyndon_basis_words
from src.kv import (
    KVPair,
    density_flow_residual,
    divergence,
    dzt_residual,
    homotopy_check,
    homotopy_generating,
    kv1_lhs,
    kv1_linear_system,
    kv1_residual,
    kv2_residual,
    load_pair,
    save_pair,
    solve_kv,
    solve_kv1,
)
from src.liealg import SymPoly, builtin_lie_algebra, evaluate_free_lie
from src.liealg.algebra import abelian


def y(i, degree):
    return FreeLieSeries.generator(i, degree)


def random_series(rng, degree):
    terms = {}
    for d in range(1, degree + 1):
        for word in lyndon_basis_words(2, d):
            if rng.random() < 0.5:
                terms[word] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return FreeLieSeries(terms, degree)


def test_kv1_lhs_low_degrees():
    lhs = kv1_lhs(3)
    assert lhs.homogeneous(1).is_zero()
    assert lhs.coefficient((1, 2)) == Fraction(1, 2)
    assert lhs.coefficient((1, 1, 2)) == Fraction(-1, 12)
    assert lhs.coefficient((1, 2, 2)) == Fraction(-1, 12)
    with pytest.raises(TruncationError):
        kv1_lhs(0)


def test_kv1_residual_examples():
    zero = FreeLieSeries.zero(1)
    assert kv1_residual(zero, zero, 2).to_text() == "1/2 [y1,y2]"
    assert kv1_residual(y(2, 1).scale(Fraction(1, 4)), y(1, 1).scale(Fraction(-1, 4)), 2).is_zero()
    with pytest.raises(TruncationError):
        kv1_residual(zero, zero, 3)


def test_kv1_residual_vanishes_on_abelian_algebras():
    rng = random.Random(5)
    g = abelian(3)
    for _ in range(10):
        residual = kv1_residual(random_series(rng, 3), random_series(rng, 3), 4)
        point = [[Fraction(rng.randint(-5, 5)) for _ in range(3)] for _ in range(2)]
        assert all(c == 0 for c in evaluate_free_lie(g, residual, point))


def test_degree_one_linear_system():
    matrix, rhs = kv1_linear_system(1)
    assert matrix == sp.Matrix([[0, 1, -1, 0]])
    assert rhs == sp.Matrix([sp.Rational(1, 2)])


def test_solver_picks_the_symmetric_representative():
    solution = solve_kv1(3)
    assert solution.pair.F.to_text() == "1/4 y2 + 1/24 [y1,y2]"
    assert solution.pair.G.to_text() == "-1/4 y1 - 1/24 [y1,y2]"
    assert solution.fallback_degrees == []
    assert len(solution.kernels[1]) == 3


@pytest.mark.parametrize("order", [2, 3, 4, 5])
def test_solver_residual_is_exactly_zero(order):
    pair = solve_kv1(order).pair
    assert pair.order == order
    assert kv1_residual(pair.F, pair.G, order).is_zero()


def test_kernel_directions_solve_the_homogeneous_system():
    solution = solve_kv1(4)
    for degree, kernel in solution.kernels.items():
        for F, G in kernel:
            shifted = kv1_residual(solution.pair.F + F, solution.pair.G + G, degree + 1)
            assert shifted.homogeneous(degree + 1).is_zero()


def test_solver_order_limits():
    with pytest.raises(TruncationError):
        solve_kv1(1)
    with pytest.raises(OrderCap):
        solve_kv1(6)


def test_divergence_examples():
    g = builtin_lie_algebra("aff1")
    zero = FreeLieSeries.zero(1)
    assert divergence(g, TangentialDerivation(zero, zero), 1).is_zero()
    assert divergence(g, TangentialDerivation(y(2, 1), zero), 1).is_zero()
    assert divergence(g, TangentialDerivation(y(1, 1), zero), 1).to_text() == "u0"


def test_divergence_is_linear():
    rng = random.Random(11)
    g = builtin_lie_algebra("sl2")
    for _ in range(3):
        a = TangentialDerivation(random_series(rng, 3), random_series(rng, 3))
        b = TangentialDerivation(random_series(rng, 3), random_series(rng, 3))
        total = TangentialDerivation(a.u1 + b.u1, a.u2 + b.u2)
        assert divergence(g, total, 3).poly == divergence(g, a, 3).poly + divergence(g, b, 3).poly


def test_kv2_residual_vanishes_on_abelian_algebras():
    pair = solve_kv1(3).pair
    assert kv2_residual(abelian(3), pair, 2).is_zero()


def test_kv2_residual_detects_a_wrong_pair():
    g = builtin_lie_algebra("aff1")
    pair = KVPair(y(1, 1), FreeLieSeries.zero(1), 2)
    assert kv2_residual(g, pair, 1).to_text() == "u0"
    with pytest.raises(TruncationError):
        kv2_residual(g, pair, 2)


@pytest.mark.parametrize("name", ["aff1", "sl2", "gl2"])
def test_joint_solution_satisfies_kv2(name):
    g = builtin_lie_algebra(name)
    pair = solve_kv(3, [g]).pair
    assert kv1_residual(pair.F, pair.G, 3).is_zero()
    assert kv2_residual(g, pair, 2).is_zero()


def test_joint_solution_over_the_builtin_family():
    family = [builtin_lie_algebra(name) for name in ("aff1", "sl2", "gl2", "heis3")]
    pair = solve_kv(4, family).pair
    assert kv1_residual(pair.F, pair.G, 4).is_zero()
    for g in family:
        assert kv2_residual(g, pair, 3).is_zero(), g.label


def test_dzt_residual_vanishes_for_the_solver_pair():
    pair = solve_kv1(4).pair
    residual = dzt_residual(pair, 4)
    assert sorted(residual.coefficients) == [0, 1, 2]
    assert residual.is_zero()


def test_dzt_residual_without_a_solution():
    zero = FreeLieSeries.zero(1)
    residual = dzt_residual(KVPair(zero, zero, 2), 2)
    assert residual.coefficient(0).to_text() == "1/2 [y1,y2]"
    assert dzt_residual(KVPair(zero, zero, 2), 1).is_zero()


@pytest.mark.parametrize("name", ["aff1", "sl2"])
def test_density_flow_residual_vanishes(name):
    g = builtin_lie_algebra(name)
    pair = solve_kv(4, [g]).pair
    assert density_flow_residual(g, pair, 3).is_zero()


def test_homotopy_with_constants_is_trivial():
    g = builtin_lie_algebra("sl2")
    pair = solve_kv(3, [g]).pair
    result = homotopy_check(g, pair, SymPoly.constant(3, 3), SymPoly.variable(0, 3), 2)
    assert result.lhs.is_zero() and result.rhs.is_zero()


def test_homotopy_sl2_example():
    g = builtin_lie_algebra("sl2")
    pair = solve_kv(4, [g]).pair
    result = homotopy_check(g, pair, SymPoly.variable(0, 3), SymPoly.variable(1, 3), 3)
    assert result.lhs.to_text() == "-1/6 + 1/2 x2"
    assert result.rhs == result.lhs
    assert result.difference.is_zero()


@pytest.mark.parametrize("name", ["aff1", "sl2"])
def test_homotopy_formula_over_monomial_pairs(name):
    g = builtin_lie_algebra(name)
    pair = solve_kv(4, [g]).pair
    generating = homotopy_generating(g, pair, 3)
    monomials = [SymPoly.monomial(e) for e in monomials_up_to(g.dim, 2)]
    for f1 in monomials:
        for f2 in monomials:
            if f1.degree() + f2.degree() > 3:
                continue
            result = homotopy_check(g, pair, f1, f2, 3, generating=generating)
            assert result.difference.is_zero(), f"{f1} * {f2}: {result.difference}"


@pytest.mark.parametrize("name", ["aff1", "sl2"])
def test_homotopy_formula_over_quadratic_monomial_pairs(name):
    g = builtin_lie_algebra(name)
    pair = solve_kv(5, [g]).pair
    generating = homotopy_generating(g, pair, 4)
    quadratics = [SymPoly.monomial(e) for e in monomials_up_to(g.dim, 2) if sum(e) == 2]
    for f1 in quadratics:
        for f2 in quadratics:
            result = homotopy_check(g, pair, f1, f2, 4, generating=generating)
            assert result.difference.is_zero(), f"{f1} * {f2}: {result.difference}"


def test_homotopy_truncation_limits():
    g = builtin_lie_algebra("aff1")
    pair = solve_kv(3, [g]).pair
    square = SymPoly.variable(0, 2) * SymPoly.variable(1, 2)
    with pytest.raises(TruncationError):
        homotopy_check(g, pair, square, square, 3)
    with pytest.raises(TruncationError):
        homotopy_generating(g, pair, 3)


def test_pair_json_round_trip(tmp_path):
    pair = solve_kv1(4).pair
    path = tmp_path / "pair.json"
    save_pair(pair, path)
    assert load_pair(path) == pair
    path.write_text('{"schema": 1, "order": 3, "F": "1/4 y2"}')
    with pytest.raises(ParseError):
        load_pair(path)
    path.write_text('{"schema": 2, "order": 3, "F": "1/4 y2", "G": "-1/4 y1"}')
    with pytest.raises(ParseError):
        load_pair(path)
    with pytest.raises(ParseError):
        load_pair(tmp_path / "missing.json")
