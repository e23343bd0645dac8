"""Bidifferential operator B_Gamma of a graph for the linear Poisson structure of g*."""
from fractions import Fraction
from itertools import product
from typing import Dict, List, Tuple

from src.errors import InDegreeTooHigh
from src.graphs.admissible import AdmissibleGraph
from src.liealg.algebra import LieAlgebra
from src.liealg.sympoly import SymPoly


def _nonzero_pairs(g: LieAlgebra) -> List[Tuple[int, int]]:
    return sorted(g.table)


def _differentiate(f: SymPoly, indices: List[int]) -> SymPoly:
    for index in indices:
        f = f.derivative(index)
        if f.is_zero():
            break
    return f


def bidiff_apply(
    g: LieAlgebra,
    graph: AdmissibleGraph,
    f1: SymPoly,
    f2: SymPoly,
    strict: bool = False,
) -> SymPoly:
    """B_Gamma(f1, f2) with pi = f_ij^k x_k d_i d_j placed at every aerial vertex.

    Slot 0 of a vertex carries d_i and slot 1 carries d_j. An aerial vertex
    hit by two derivatives contributes 0, or raises InDegreeTooHigh when
    ``strict`` is set.
    """
    if graph.m != 2:
        raise ValueError("operators are assembled for two ground vertices only")
    if any(len(targets) != 2 for targets in graph.edges):
        raise ValueError("every aerial vertex needs exactly two outgoing edges")
    if graph.max_aerial_in_degree() >= 2:
        if strict:
            raise InDegreeTooHigh(f"an aerial vertex of {graph} receives two derivatives")
        return SymPoly.zero(f1.nvars)
    nvars = f1.nvars
    pairs = _nonzero_pairs(g)
    linear: Dict[Tuple[int, int], SymPoly] = {}
    for i, j in pairs:
        term = SymPoly.zero(nvars)
        for k, c in g.bracket_of_basis(i, j).items():
            term = term + SymPoly.variable(k, nvars).scale(c)
        linear[(i, j)] = term

    total = SymPoly.zero(nvars)
    ground1, ground2 = graph.ground(0), graph.ground(1)
    for labels in product(pairs, repeat=graph.n):
        incoming: Dict[int, List[int]] = {v: [] for v in range(graph.num_vertices)}
        for v, (i, j) in enumerate(labels):
            first, second = graph.edges[v]
            incoming[first].append(i)
            incoming[second].append(j)
        scalar = Fraction(1)
        factors: List[SymPoly] = []
        for v, (i, j) in enumerate(labels):
            if incoming[v]:
                scalar *= g.constant(i, j, incoming[v][0])
                if scalar == 0:
                    break
            else:
                factors.append(linear[(i, j)])
        if scalar == 0:
            continue
        left = _differentiate(f1, incoming[ground1])
        if left.is_zero():
            continue
        right = _differentiate(f2, incoming[ground2])
        if right.is_zero():
            continue
        term = left * right
        for factor in factors:
            term = term * factor
        total = total + term.scale(scalar)
    return total
