"""Tests for the propagator, Monte-Carlo graph weights and the graph star product."""
import math
from fractions import Fraction

import numpy as np
import pytest

from src.envelope import star
from src.envelope.expseries import monomials_up_to
from src.errors import BudgetCap, CoincidentPoints, DegenerateForm
from src.graphs import AdmissibleGraph, enumerate_graphs
from src.liealg import SymPoly, builtin_lie_algebra
from src.types import WheelIntegrand
from src.weights import (
    RunningStats,
    circular_distance,
    collapse_limit_angle,
    graph_star,
    mc_weight,
    propagator_angle,
    pullback_density,
    star_to_order,
    wheel_graph,
    wheel_weight_check,
)

WEDGE = AdmissibleGraph(1, 2, ((1, 2),))
GROUNDED_WHEEL = AdmissibleGraph(2, 2, ((1, 2), (0, 3)))


def test_propagator_examples():
    assert circular_distance(propagator_angle(0.7, 0.3 + 1j), 0.0) < 1e-12
    assert propagator_angle(1j, 1) == pytest.approx(0.75)
    assert circular_distance(propagator_angle(1j, 2j), 0.0) < 1e-12
    with pytest.raises(CoincidentPoints):
        propagator_angle(0.5 + 0.5j, 0.5 + 0.5j)


@pytest.mark.parametrize("height", [1e-3, 1e-6])
def test_propagator_vanishes_at_the_real_line(height):
    for z2 in (1j, 0.3 + 2j, -1 + 0.5j):
        for x in (-3.0, -0.5, 0.0, 0.8, 4.0):
            value = propagator_angle(complex(x, height), z2)
            assert circular_distance(value, 0.0) < 1e-2, f"phi({x}+{height}i, {z2}) = {value}"


@pytest.mark.parametrize("radius", [1e-3, 1e-5])
def test_propagator_collapse_limit(radius):
    z1 = 0.3 + 0.7j
    for j in range(8):
        theta = 2 * math.pi * j / 8
        value = propagator_angle(z1, z1 + radius * complex(math.cos(theta), math.sin(theta)))
        assert circular_distance(value, collapse_limit_angle(theta)) < 1e-2


def test_running_stats_merge_matches_numpy():
    rng = np.random.default_rng(3)
    values = rng.normal(size=1000)
    merged = RunningStats(0, 0.0, 0.0)
    for chunk in np.array_split(values, 7):
        merged = merged.merge(RunningStats.of(chunk))
    assert merged.count == 1000
    np.testing.assert_allclose(merged.mean, values.mean(), rtol=1e-12)
    np.testing.assert_allclose(merged.stderr, values.std(ddof=1) / math.sqrt(1000), rtol=1e-10)


def test_empty_graph_has_unit_weight():
    estimate = mc_weight(AdmissibleGraph(0, 2, ()), 100, 7)
    assert estimate.mean == 1.0 and estimate.stderr == 0.0


def test_wedge_weight_is_one_half():
    estimate = mc_weight(WEDGE, 20_000, 7)
    assert estimate.within(0.5, 3, floor=1e-9), f"weight {estimate.mean} +- {estimate.stderr}"
    swapped = mc_weight(WEDGE.swap_slots(0), 20_000, 7)
    assert swapped.within(-0.5, 3, floor=1e-9)


def test_edge_swap_flips_the_sign():
    for graph in enumerate_graphs(2, 2)[::7]:
        original = mc_weight(graph, 2_000, 11)
        swapped = mc_weight(graph.swap_slots(1), 2_000, 11)
        assert original.mean == pytest.approx(-swapped.mean, rel=1e-9, abs=1e-8), graph.to_text()


def test_weight_rejects_wrong_form_degree():
    with pytest.raises(DegenerateForm):
        mc_weight(AdmissibleGraph(1, 2, ((1,),)), 100, 7)


def test_estimates_are_reproducible():
    first = mc_weight(GROUNDED_WHEEL, 5_000, 19)
    second = mc_weight(GROUNDED_WHEEL, 5_000, 19)
    assert (first.mean, first.stderr, first.samples) == (second.mean, second.stderr, second.samples)
    other = mc_weight(GROUNDED_WHEEL, 5_000, 20)
    assert other.mean != first.mean


def test_estimates_are_reproducible_across_workers():
    first = mc_weight(GROUNDED_WHEEL, 6_001, 5, workers=2)
    second = mc_weight(GROUNDED_WHEEL, 6_001, 5, workers=2)
    assert first.samples == 6_001
    assert (first.mean, first.stderr) == (second.mean, second.stderr)


def test_wheel_graph_shape():
    wheel = wheel_graph(3)
    assert wheel.to_text() == "3 1 ; 0:(1,g0) 1:(2,g0) 2:(0,g0)"
    with pytest.raises(ValueError):
        wheel_graph(1)


def test_absolute_wheel_density_is_positive():
    estimate = wheel_weight_check(2, 20_000, 7, integrand=WheelIntegrand.ABSOLUTE)
    assert estimate.mean > 4 * estimate.stderr > 0


def test_constant_spoke_row_is_the_angle_seen_from_one():
    point, h = 0.3 + 0.8j, 1e-6

    def angles(p):
        return propagator_angle(p, 0.0), np.angle(p - 1) / np.pi

    dx = [(a - b) / (2 * h) for a, b in zip(angles(point + h), angles(point - h))]
    dy = [(a - b) / (2 * h) for a, b in zip(angles(point + 1j * h), angles(point - 1j * h))]
    expected = dx[0] * dy[1] - dx[1] * dy[0]
    z = np.array([[point]])
    assert abs(expected) > 0.01
    assert pullback_density(z, (0.0, 1.0), [(0, 1), (0, 1)], replaced=1)[0] == pytest.approx(expected, rel=1e-5)
    assert pullback_density(z, (0.0, 1.0), [(0, 1), (0, 1)])[0] == pytest.approx(0.0, abs=1e-12)


def test_constant_spoke_wheel_does_not_vanish():
    estimate = wheel_weight_check(2, 100_000, 7, integrand=WheelIntegrand.CONSTANT_SPOKE)
    assert estimate.graph.endswith("[constant_spoke]")
    assert abs(estimate.mean) > 4 * estimate.stderr > 0, f"{estimate.mean} +- {estimate.stderr}"


@pytest.mark.slow
@pytest.mark.parametrize("spokes", [2, 3])
def test_wheel_weights_vanish(spokes):
    estimate = wheel_weight_check(spokes, 1_000_000, 7)
    assert abs(estimate.mean) < max(0.01, 4 * estimate.stderr), f"{estimate.mean} +- {estimate.stderr}"


@pytest.mark.slow
def test_wedge_weight_with_a_million_samples():
    estimate = mc_weight(WEDGE, 1_000_000, 7)
    assert estimate.within(0.5, 3, floor=1e-9)


def test_graph_star_order_zero_is_the_product():
    g = builtin_lie_algebra("sl2")
    f1 = SymPoly.variable(0, 3) * SymPoly.variable(2, 3)
    f2 = SymPoly.variable(1, 3) + 2
    result = graph_star(g, f1, f2, 0, 100, 7)
    assert result.coefficients == {e: float(c) for e, c in (f1 * f2).terms.items()}
    assert not result.estimates


def test_graph_star_order_one_on_sl2():
    g = builtin_lie_algebra("sl2")
    result = graph_star(g, SymPoly.variable(0, 3), SymPoly.variable(1, 3), 1, 10_000, 7)
    assert result.coefficient((1, 1, 0)) == pytest.approx(1.0)
    assert abs(result.coefficient((0, 0, 1)) - 0.5) <= max(4 * result.error((0, 0, 1)), 1e-9)


def test_graph_star_matches_envelope_on_heis3():
    g = builtin_lie_algebra("heis3")
    graphs = {1: enumerate_graphs(1, 2, max_in_degree_aerial=1), 2: enumerate_graphs(2, 2, max_in_degree_aerial=1)}
    monomials = [e for e in monomials_up_to(3, 2) if sum(e) > 0]
    for e1 in monomials:
        for e2 in monomials:
            f1, f2 = SymPoly.monomial(e1), SymPoly.monomial(e2)
            result = graph_star(g, f1, f2, 2, 2_000, 7, graphs_by_order=graphs)
            rows = result.compare(star_to_order(g, f1, f2, 2), 4)
            assert all(row["ok"] for row in rows), f"{f1} * {f2}: {rows}"


@pytest.mark.slow
def test_graph_star_matches_envelope_on_sl2_at_order_two():
    g = builtin_lie_algebra("sl2")
    graphs = {1: enumerate_graphs(1, 2, max_in_degree_aerial=1), 2: enumerate_graphs(2, 2, max_in_degree_aerial=1)}
    cache = {}
    monomials = [e for e in monomials_up_to(3, 2) if sum(e) > 0]
    for e1 in monomials:
        for e2 in monomials:
            f1, f2 = SymPoly.monomial(e1), SymPoly.monomial(e2)
            result = graph_star(g, f1, f2, 2, 100_000, 7, graphs_by_order=graphs, weight_cache=cache)
            rows = result.compare(star_to_order(g, f1, f2, 2), 4)
            assert all(row["ok"] for row in rows), f"{f1} * {f2}: {rows}"


def test_star_to_order_drops_higher_hbar_terms():
    g = builtin_lie_algebra("sl2")
    x0, x1, x2 = (SymPoly.variable(i, 3) for i in range(3))
    assert star(g, x0, x1).coefficient((0, 0, 0)) == Fraction(-1, 6)
    assert star_to_order(g, x0, x1, 1) == x0 * x1 + Fraction(1, 2) * x2
    assert star_to_order(g, x0, x1, 2) == star(g, x0, x1)
    assert star_to_order(g, x0 * x0, x1, 0) == x0 * x0 * x1
    mixed = x0 + x1 * x2
    assert star_to_order(g, mixed, x0, 5) == star(g, mixed, x0)


def test_order_one_graph_star_agrees_with_truncated_sl2_star():
    g = builtin_lie_algebra("sl2")
    x0, x1 = SymPoly.variable(0, 3), SymPoly.variable(1, 3)
    rows = graph_star(g, x0, x1, 1, 20_000, 7).compare(star_to_order(g, x0, x1, 1), 4)
    assert [row["monomial"] for row in rows] == ["x2", "x0*x1"]
    assert all(row["ok"] for row in rows), rows


def test_weight_cache_is_shared_between_pairs():
    g = builtin_lie_algebra("sl2")
    x0, x1, x2 = (SymPoly.variable(i, 3) for i in range(3))
    cache = {}
    first = graph_star(g, x0, x1, 1, 2_000, 7, weight_cache=cache)
    assert len(cache) == len(first.estimates) > 0
    second = graph_star(g, x1, x2, 1, 2_000, 7, weight_cache=cache)
    assert second.estimates == first.estimates
    assert second.estimates == graph_star(g, x1, x2, 1, 2_000, 7).estimates


def test_graph_star_order_cap():
    g = builtin_lie_algebra("heis3")
    with pytest.raises(BudgetCap):
        graph_star(g, SymPoly.variable(0, 3), SymPoly.variable(1, 3), 4, 10, 7)
