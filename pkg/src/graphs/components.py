"""Quotient graphs and simple components of graphs with two external vertices."""
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union

import networkx as nx

from src.graphs.admissible import AdmissibleGraph
from src.types import ComponentType


@dataclass(frozen=True)
class DegenerateQuotient:
    """Collapsing produced something that is not admissible."""
    reason: str


def quotient_graph(graph: AdmissibleGraph, subset: Iterable[int]) -> Union[AdmissibleGraph, DegenerateQuotient]:
    """Shrink the vertices in ``subset`` to one vertex.

    Edges inside the subset disappear; edges leaving it become edges of the
    new vertex, ordered by (source, slot). The new vertex takes the place of
    min(subset).
    """
    collapsed = frozenset(subset)
    if not collapsed:
        raise ValueError("cannot collapse an empty vertex set")
    if any(not 0 <= v < graph.num_vertices for v in collapsed):
        raise ValueError(f"subset {sorted(collapsed)} has vertices outside the graph")
    representative = min(collapsed)
    grounds = [v for v in collapsed if graph.is_ground(v)]
    outgoing = [
        (v, slot, t) for v, slot, t in graph.edge_list() if v in collapsed and t not in collapsed
    ]
    if len(grounds) > 1:
        return DegenerateQuotient("two ground vertices collapsed together")
    if grounds and outgoing:
        return DegenerateQuotient("collapsed ground vertex would have outgoing edges")

    kept = grounds[0] if grounds else representative
    survivors = sorted(v for v in range(graph.num_vertices) if v not in collapsed or v == kept)
    new_id = {v: k for k, v in enumerate(survivors)}
    image = {v: new_id[kept] if v in collapsed else new_id[v] for v in range(graph.num_vertices)}
    aerial_survivors = [v for v in survivors if not graph.is_ground(v)]
    new_n = len(aerial_survivors)

    edges: List[Tuple[int, ...]] = []
    for v in aerial_survivors:
        if v == kept:
            targets = tuple(image[t] for _, _, t in sorted(outgoing))
        else:
            targets = tuple(image[t] for t in graph.edges[v])
        if len(set(targets)) != len(targets):
            return DegenerateQuotient(f"multiple edge from collapsed vertex {new_id[v]}")
        if new_id[v] in targets:
            return DegenerateQuotient(f"short loop at vertex {new_id[v]}")
        edges.append(targets)
    return AdmissibleGraph(new_n, graph.m, tuple(edges))


@dataclass(frozen=True)
class ComponentReport:
    components: Tuple[Tuple[FrozenSet[int], ComponentType], ...]
    residue: FrozenSet[int] = field(default_factory=frozenset)

    def types(self) -> List[ComponentType]:
        return [kind for _, kind in self.components]


def _internal_digraph(graph: AdmissibleGraph) -> nx.DiGraph:
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(graph.n))
    for v, _, t in graph.edge_list():
        if not graph.is_ground(t):
            digraph.add_edge(v, t)
    return digraph


def classify_components(
    graph: AdmissibleGraph,
    root_edge: Optional[Tuple[int, int]] = None,
) -> ComponentReport:
    """Split the internal (aerial) vertices into simple components.

    ``graph`` is a graph whose ground vertices play the two external
    vertices. ``root_edge = (k, v)`` records an edge from external vertex k
    to internal vertex v, which turns the tree rooted at v into type iii.
    Trees: |E| = |C| - 1, a single root, every other vertex hit once.
    Wheels: |E| = |C| and every vertex hit exactly once.
    """
    if graph.m != 2:
        raise ValueError("components are defined for two external vertices")
    digraph = _internal_digraph(graph)
    components = []
    residue = set()
    for vertices in sorted(nx.weakly_connected_components(digraph), key=min):
        sub = digraph.subgraph(vertices)
        in_degrees = dict(sub.in_degree())
        roots = [v for v, d in in_degrees.items() if d == 0]
        if sub.number_of_edges() == len(vertices) - 1 and len(roots) == 1 and all(
            d == 1 for v, d in in_degrees.items() if v != roots[0]
        ):
            kind = ComponentType.TREE_I
            if root_edge is not None and root_edge[1] == roots[0]:
                kind = ComponentType.TREE_WITH_RETURN_III
            components.append((frozenset(vertices), kind))
        elif sub.number_of_edges() == len(vertices) and all(d == 1 for d in in_degrees.values()):
            components.append((frozenset(vertices), ComponentType.WHEEL_II))
        else:
            residue.update(vertices)
    return ComponentReport(tuple(components), frozenset(residue))
