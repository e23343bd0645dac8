"""Admissible graphs: aerial vertices with ordered outgoing edges, ground vertices as sinks."""
import logging
from dataclasses import dataclass
from itertools import permutations, product
from typing import Dict, Iterator, List, Optional, Tuple

import networkx as nx
import numpy as np
import pyparsing as pp
from networkx.algorithms.isomorphism import DiGraphMatcher

from src.errors import ParseError

logger = logging.getLogger(__name__)

EdgeList = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class AdmissibleGraph:
    """Graph with aerial vertices 0..n-1 and ground vertices n..n+m-1.

    ``edges[v]`` lists the targets of aerial vertex v in slot order. Ground
    vertices have no outgoing edges.
    """
    n: int
    m: int
    edges: EdgeList

    def __post_init__(self):
        edges = tuple(tuple(targets) for targets in self.edges)
        object.__setattr__(self, "edges", edges)
        if len(edges) != self.n:
            raise ValueError(f"{len(edges)} edge lists for {self.n} aerial vertices")
        for v, targets in enumerate(edges):
            if any(not 0 <= t < self.n + self.m for t in targets):
                raise ValueError(f"vertex {v} has a target out of range: {targets}")
            if v in targets:
                raise ValueError(f"vertex {v} has a short loop")
            if len(set(targets)) != len(targets):
                raise ValueError(f"vertex {v} has a multiple edge: {targets}")

    @property
    def num_vertices(self) -> int:
        return self.n + self.m

    def ground(self, k: int) -> int:
        return self.n + k

    def is_ground(self, vertex: int) -> bool:
        return vertex >= self.n

    def edge_list(self) -> List[Tuple[int, int, int]]:
        """(source, slot, target) triples in slot order."""
        return [(v, slot, t) for v, targets in enumerate(self.edges) for slot, t in enumerate(targets)]

    @property
    def num_edges(self) -> int:
        return sum(len(targets) for targets in self.edges)

    def in_degrees(self) -> Dict[int, int]:
        degrees = {v: 0 for v in range(self.num_vertices)}
        for _, _, t in self.edge_list():
            degrees[t] += 1
        return degrees

    def max_aerial_in_degree(self) -> int:
        degrees = self.in_degrees()
        return max((degrees[v] for v in range(self.n)), default=0)

    def relabel(self, order: Tuple[int, ...]) -> "AdmissibleGraph":
        """Rename aerial vertex order[k] to k; ground vertices are fixed."""
        position = {old: new for new, old in enumerate(order)}
        position.update({g: g for g in range(self.n, self.num_vertices)})
        return AdmissibleGraph(
            self.n, self.m, tuple(tuple(position[t] for t in self.edges[old]) for old in order)
        )

    def swap_slots(self, vertex: int) -> "AdmissibleGraph":
        """Reverse the edge order of one aerial vertex."""
        edges = list(self.edges)
        edges[vertex] = tuple(reversed(edges[vertex]))
        return AdmissibleGraph(self.n, self.m, tuple(edges))

    def canonical_form(self) -> EdgeList:
        """Lexicographically smallest edge list over aerial relabelings."""
        return min(self.relabel(order).edges for order in permutations(range(self.n)))

    def canonical(self) -> "AdmissibleGraph":
        return AdmissibleGraph(self.n, self.m, self.canonical_form())

    def to_networkx(self) -> nx.DiGraph:
        digraph = nx.DiGraph()
        for v in range(self.num_vertices):
            digraph.add_node(v, label="aerial" if v < self.n else f"g{v - self.n}")
        for v, slot, t in self.edge_list():
            digraph.add_edge(v, t, slot=slot)
        return digraph

    def to_text(self) -> str:
        def name(t: int) -> str:
            return f"g{t - self.n}" if t >= self.n else str(t)

        clauses = [f"{v}:({','.join(name(t) for t in targets)})" for v, targets in enumerate(self.edges)]
        return f"{self.n} {self.m} ;" + "".join(f" {c}" for c in clauses)

    def __str__(self) -> str:
        return self.to_text()


def isomorphic(a: AdmissibleGraph, b: AdmissibleGraph) -> bool:
    """Isomorphism keeping ground labels and edge slots, via networkx VF2."""
    if (a.n, a.m, a.num_edges) != (b.n, b.m, b.num_edges):
        return False
    matcher = DiGraphMatcher(
        a.to_networkx(),
        b.to_networkx(),
        node_match=lambda x, y: x["label"] == y["label"],
        edge_match=lambda x, y: x["slot"] == y["slot"],
    )
    return matcher.is_isomorphic()


def _grammar():
    integer = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))
    target = pp.Combine(pp.Literal("g") + pp.Word(pp.nums)) | pp.Word(pp.nums)
    clause = pp.Group(
        integer + pp.Suppress(":") + pp.Suppress("(") + pp.Group(pp.Opt(pp.DelimitedList(target))) + pp.Suppress(")")
    )
    return integer + integer + pp.Suppress(";") + pp.Group(pp.ZeroOrMore(clause)) + pp.StringEnd()


_GRAPH_GRAMMAR = _grammar()


def parse_graph(text: str) -> AdmissibleGraph:
    """Read ``n m ; v:(t1,t2) ...``; ground vertices are written g0, g1, ..."""
    try:
        n, m, clauses = _GRAPH_GRAMMAR.parse_string(text.strip(), parse_all=True)
    except pp.ParseException as exc:
        raise ParseError(f"cannot parse graph {text!r}: {exc}") from exc
    edges: Dict[int, Tuple[int, ...]] = {}
    for clause in clauses:
        vertex, targets = clause[0], clause[1]
        resolved = tuple(n + int(t[1:]) if t.startswith("g") else int(t) for t in targets)
        if vertex in edges or not 0 <= vertex < n:
            raise ParseError(f"vertex {vertex} is repeated or out of range in {text!r}")
        edges[vertex] = resolved
    try:
        return AdmissibleGraph(n, m, tuple(edges.get(v, ()) for v in range(n)))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _vertex_choices(n: int, m: int, v: int, out_degree: int) -> List[Tuple[int, ...]]:
    others = [t for t in range(n + m) if t != v]
    return list(permutations(others, out_degree))


def enumerate_graphs(
    n: int,
    m: int,
    out_degree: int = 2,
    max_in_degree_aerial: Optional[int] = None,
) -> List[AdmissibleGraph]:
    """Every labelled admissible graph with the given out-degree at each aerial vertex."""
    if 2 * n + m - 2 < 0:
        raise ValueError("need 2n + m - 2 >= 0")
    choices = [_vertex_choices(n, m, v, out_degree) for v in range(n)]
    graphs = []
    for edges in product(*choices):
        graph = AdmissibleGraph(n, m, edges)
        if max_in_degree_aerial is not None and graph.max_aerial_in_degree() > max_in_degree_aerial:
            continue
        graphs.append(graph)
    logger.debug("enumerated %d graphs of type (%d, %d)", len(graphs), n, m)
    return graphs


def enumerate_graphs_by_target_sets(
    n: int,
    m: int,
    out_degree: int = 2,
    max_in_degree_aerial: Optional[int] = None,
) -> Iterator[AdmissibleGraph]:
    """Second enumerator, built from adjacency matrices.

    Each aerial row is any 0/1 vector with ``out_degree`` ones. A matrix is
    kept when its diagonal is empty and the aerial column sums respect the
    in-degree bound; every slot order of every row is then emitted.
    """
    size = n + m
    rows = [bits for bits in product((0, 1), repeat=size) if sum(bits) == out_degree]
    for matrix_rows in product(rows, repeat=n):
        adjacency = np.array(matrix_rows, dtype=int).reshape(n, size)
        aerial = adjacency[:, :n]
        if n and np.diagonal(aerial).any():
            continue
        if n and max_in_degree_aerial is not None and aerial.sum(axis=0).max() > max_in_degree_aerial:
            continue
        target_sets = [tuple(int(t) for t in np.flatnonzero(row)) for row in adjacency]
        for edges in product(*(permutations(targets) for targets in target_sets)):
            yield AdmissibleGraph(n, m, edges)


def canonical_classes(graphs: List[AdmissibleGraph]) -> Dict[EdgeList, int]:
    """Canonical form -> number of labelled graphs in the class."""
    classes: Dict[EdgeList, int] = {}
    for graph in graphs:
        key = graph.canonical_form()
        classes[key] = classes.get(key, 0) + 1
    return classes
