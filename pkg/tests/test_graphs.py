"""Tests for admissible graphs, their operators, quotients and components."""
import random
from fractions import Fraction

import pytest

from src.errors import InDegreeTooHigh, ParseError
from src.graphs import (
    AdmissibleGraph,
    DegenerateQuotient,
    bidiff_apply,
    canonical_classes,
    classify_components,
    enumerate_graphs,
    enumerate_graphs_by_target_sets,
    isomorphic,
    parse_graph,
    quotient_graph,
)
from src.graphs.admissible import _grammar
from src.liealg import SymPoly, ad_matrix, builtin_lie_algebra, poisson_bracket
from src.types import ComponentType

# Ground vertices of an n-vertex graph are n and n + 1
TREE_I = AdmissibleGraph(4, 2, ((1, 2), (3, 4), (4, 5), (4, 5)))
WHEEL_II = AdmissibleGraph(5, 2, ((1, 3), (2, 5), (0, 6), (4, 5), (5, 6)))
TWO_WHEEL = AdmissibleGraph(2, 2, ((1, 2), (0, 3)))


def x(i, dim=3):
    return SymPoly.variable(i, dim)


def random_graph(rng, n):
    edges = []
    for v in range(n):
        others = [t for t in range(n + 2) if t != v]
        edges.append(tuple(rng.sample(others, 2)))
    return AdmissibleGraph(n, 2, tuple(edges))


def test_enumeration_small_cases():
    assert len(enumerate_graphs(0, 2)) == 1
    graphs = enumerate_graphs(1, 2)
    assert sorted(g.edges for g in graphs) == [((1, 2),), ((2, 1),)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_two_enumerators_agree(n):
    first = enumerate_graphs(n, 2, max_in_degree_aerial=1)
    second = list(enumerate_graphs_by_target_sets(n, 2, max_in_degree_aerial=1))
    assert len(first) == len(second), f"labelled counts differ at n = {n}"
    assert canonical_classes(first) == canonical_classes(second)


def test_matrix_enumerator_without_in_degree_bound():
    graphs = list(enumerate_graphs_by_target_sets(2, 2))
    assert len({graph.edges for graph in graphs}) == len(graphs) == 36
    assert {graph.edges for graph in graphs} == {graph.edges for graph in enumerate_graphs(2, 2)}
    assert [graph.edges for graph in enumerate_graphs_by_target_sets(0, 2)] == [()]


@pytest.mark.slow
def test_two_enumerators_agree_at_four_vertices():
    first = enumerate_graphs(4, 2, max_in_degree_aerial=1)
    second = list(enumerate_graphs_by_target_sets(4, 2, max_in_degree_aerial=1))
    assert set(canonical_classes(first)) == set(canonical_classes(second))


def test_in_degree_cap_filters():
    capped = enumerate_graphs(3, 2, max_in_degree_aerial=1)
    assert all(g.max_aerial_in_degree() <= 1 for g in capped)
    assert len(capped) < len(enumerate_graphs(3, 2))


def test_canonical_form_is_relabeling_invariant():
    rng = random.Random(4)
    for _ in range(50):
        n = rng.randint(1, 5)
        graph = random_graph(rng, n)
        order = list(range(n))
        rng.shuffle(order)
        relabeled = graph.relabel(tuple(order))
        assert relabeled.canonical_form() == graph.canonical_form()
        assert isomorphic(graph, relabeled)


def test_canonical_form_agrees_with_networkx():
    rng = random.Random(8)
    for _ in range(60):
        a, b = random_graph(rng, 3), random_graph(rng, 3)
        assert (a.canonical_form() == b.canonical_form()) == isomorphic(a, b)


def test_graph_text_round_trip():
    assert parse_graph(TREE_I.to_text()) == TREE_I
    assert TWO_WHEEL.to_text() == "2 2 ; 0:(1,g0) 1:(0,g1)"
    assert parse_graph("0 2 ;") == AdmissibleGraph(0, 2, ())
    with pytest.raises(ParseError):
        parse_graph("1 2 ; 0:(0,g1)")
    with pytest.raises(ParseError):
        parse_graph("1 2 ; 0:g0,g1")


@pytest.mark.filterwarnings("error::DeprecationWarning")
def test_graph_grammar_builds_without_deprecated_calls():
    n, m, clauses = _grammar().parse_string("2 2 ; 0:(1,g0) 1:(g0,g1)", parse_all=True)
    assert (n, m) == (2, 2)
    assert [list(clause[1]) for clause in clauses] == [["1", "g0"], ["g0", "g1"]]
    assert parse_graph("2 2 ; 0:(1,g0) 1:(g0,g1)").edges == ((1, 2), (2, 3))


def test_bidiff_examples():
    g = builtin_lie_algebra("sl2")
    f1, f2 = x(0) * x(2) + x(1), x(1) * x(1)
    assert bidiff_apply(g, AdmissibleGraph(0, 2, ()), f1, f2) == f1 * f2
    single = AdmissibleGraph(1, 2, ((1, 2),))
    assert bidiff_apply(g, single, f1, f2) == poisson_bracket(g, f1, f2)
    swapped = single.swap_slots(0)
    assert bidiff_apply(g, swapped, f1, f2) == -poisson_bracket(g, f1, f2)


def test_two_wheel_gives_killing_form():
    g = builtin_lie_algebra("sl2")
    for a in range(3):
        for b in range(3):
            killing = (ad_matrix(g, [int(i == a) for i in range(3)]) * ad_matrix(g, [int(i == b) for i in range(3)])).trace()
            assert bidiff_apply(g, TWO_WHEEL, x(a), x(b)) == SymPoly.constant(int(killing), 3)
    assert bidiff_apply(g, TWO_WHEEL, x(0), x(1)) == 4


def test_high_in_degree_vanishes_or_raises():
    g = builtin_lie_algebra("gl2")
    graph = AdmissibleGraph(3, 2, ((2, 3), (2, 4), (3, 4)))
    f = SymPoly.variable(0, 4) * SymPoly.variable(1, 4)
    assert bidiff_apply(g, graph, f, f).is_zero()
    with pytest.raises(InDegreeTooHigh):
        bidiff_apply(g, graph, f, f, strict=True)


def test_bidiff_scales_with_structure_constants():
    g = builtin_lie_algebra("sl2")
    f1, f2 = x(0) * x(1) + x(2), x(2) * x(2) + x(0)
    t = Fraction(3, 2)
    for graph in enumerate_graphs(2, 2, max_in_degree_aerial=1)[:40]:
        assert bidiff_apply(g.scaled(t), graph, f1, f2) == bidiff_apply(g, graph, f1, f2).scale(t**2)


def test_bidiff_is_bilinear():
    g = builtin_lie_algebra("aff1")
    graph = AdmissibleGraph(2, 2, ((1, 2), (2, 3)))
    a, b = SymPoly.variable(0, 2), SymPoly.variable(1, 2)
    c = a * b
    lhs = bidiff_apply(g, graph, a.scale(2) + c, b)
    rhs = bidiff_apply(g, graph, a, b).scale(2) + bidiff_apply(g, graph, c, b)
    assert lhs == rhs


def test_quotient_examples():
    assert quotient_graph(TREE_I, {2}) == TREE_I
    chain = AdmissibleGraph(3, 2, ((1, 3), (2, 4), (3, 4)))
    shortened = quotient_graph(chain, {0, 1})
    assert shortened == AdmissibleGraph(2, 2, ((2, 1, 3), (2, 3)))
    cycle = AdmissibleGraph(2, 2, ((1, 2), (0, 2)))
    degenerate = quotient_graph(cycle, {0, 1})
    assert isinstance(degenerate, DegenerateQuotient)
    assert "multiple edge" in degenerate.reason
    assert isinstance(quotient_graph(TWO_WHEEL, {1, 3}), DegenerateQuotient)


def test_classify_components_examples():
    assert classify_components(TREE_I).types() == [ComponentType.TREE_I]
    assert classify_components(WHEEL_II).types() == [ComponentType.WHEEL_II]
    assert classify_components(TREE_I, root_edge=(0, 0)).types() == [ComponentType.TREE_WITH_RETURN_III]
    single = AdmissibleGraph(1, 2, ((1, 2),))
    assert classify_components(single).types() == [ComponentType.TREE_I]
    union = AdmissibleGraph(4, 2, ((4, 5), (2, 4), (1, 3), (4, 5)))
    report = classify_components(union)
    assert report.types() == [ComponentType.TREE_I, ComponentType.WHEEL_II]
    assert report.components[1][0] == frozenset({1, 2, 3})
    assert not report.residue


def test_components_partition_internal_vertices():
    rng = random.Random(21)
    for _ in range(100):
        n = rng.randint(1, 6)
        report = classify_components(random_graph(rng, n))
        seen = set()
        for vertices, _ in report.components:
            assert not seen & vertices, "components overlap"
            seen |= vertices
        assert not seen & report.residue
        assert seen | report.residue == set(range(n))
        assert report.types().count(ComponentType.TREE_WITH_RETURN_III) <= 1
