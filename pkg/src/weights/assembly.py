"""Star product assembled from admissible graphs and their Monte-Carlo weights."""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from src.envelope.duflo import star
from src.errors import BudgetCap
from src.graphs.admissible import AdmissibleGraph, EdgeList, canonical_classes, enumerate_graphs
from src.graphs.bidiff import bidiff_apply
from src.liealg.algebra import LieAlgebra
from src.liealg.sympoly import Exponents, SymPoly
from src.models import WeightEstimate
from src.types import MAX_GRAPH_ORDER
from src.weights.montecarlo import mc_weight

logger = logging.getLogger(__name__)


@dataclass
class GraphStarResult:
    """Float coefficients of f1 * f2 with their propagated standard errors."""
    nvars: int
    coefficients: Dict[Exponents, float] = field(default_factory=dict)
    stderr: Dict[Exponents, float] = field(default_factory=dict)
    estimates: List[WeightEstimate] = field(default_factory=list)

    def add(self, poly: SymPoly, weight: float, weight_stderr: float) -> None:
        for exponents, c in poly.terms.items():
            self.coefficients[exponents] = self.coefficients.get(exponents, 0.0) + float(c) * weight
            spread = float(c) * weight_stderr
            self.stderr[exponents] = math.hypot(self.stderr.get(exponents, 0.0), spread)

    def coefficient(self, exponents: Exponents) -> float:
        return self.coefficients.get(tuple(exponents), 0.0)

    def error(self, exponents: Exponents) -> float:
        return self.stderr.get(tuple(exponents), 0.0)

    def compare(self, exact: SymPoly, k: float, floor: float = 1e-9) -> List[Dict[str, object]]:
        """One row per monomial of either side: exact value, estimate, stderr and verdict."""
        rows = []
        for exponents in sorted(set(self.coefficients) | set(exact.terms), key=lambda e: (sum(e), [-x for x in e])):
            expected = exact.coefficient(exponents)
            estimate = self.coefficient(exponents)
            band = max(k * self.error(exponents), floor)
            rows.append(
                {
                    "monomial": SymPoly.monomial(exponents).to_text(),
                    "exact": str(expected),
                    "estimate": estimate,
                    "stderr": self.error(exponents),
                    "ok": abs(estimate - float(expected)) <= band,
                }
            )
        return rows


def _aerial_factor(n: int) -> Fraction:
    return Fraction(1, math.factorial(n) * 2**n)


def star_to_order(g: LieAlgebra, f1: SymPoly, f2: SymPoly, order: int) -> SymPoly:
    """Exact f1 * f2 truncated after hbar^order.

    The Poisson structure is linear, so a term of p1 * p2 (p1, p2 homogeneous)
    sits at hbar order deg p1 + deg p2 - deg term.
    """
    result = SymPoly.zero(f1.nvars)
    for d1 in sorted({sum(e) for e in f1.terms}):
        for d2 in sorted({sum(e) for e in f2.terms}):
            product = star(g, f1.homogeneous(d1), f2.homogeneous(d2))
            kept = {e: c for e, c in product.terms.items() if sum(e) >= d1 + d2 - order}
            result = result + SymPoly(f1.nvars, kept)
    return result


def graph_star(
    g: LieAlgebra,
    f1: SymPoly,
    f2: SymPoly,
    order: int,
    samples: int,
    seed: int,
    workers: int = 1,
    graphs_by_order: Optional[Dict[int, List[AdmissibleGraph]]] = None,
    weight_cache: Optional[Dict[Tuple[int, EdgeList], WeightEstimate]] = None,
) -> GraphStarResult:
    """sum over n <= order of 1/(n! 2^n) sum_Gamma w_Gamma B_Gamma(f1, f2).

    Labelled graphs are grouped by canonical form; each class is estimated
    once with its own stream (seed, class index) and weighted by its size.
    Classes whose operator vanishes on (f1, f2) are not integrated.
    A ``weight_cache`` shared between calls with the same samples, seed and
    graphs reuses each class estimate; stream indices do not depend on (f1, f2).
    """
    if order > MAX_GRAPH_ORDER:
        raise BudgetCap(f"graph-star order {order} exceeds the cap {MAX_GRAPH_ORDER}")
    if order < 0:
        raise ValueError("order must be non-negative")
    result = GraphStarResult(f1.nvars)
    result.add(f1 * f2, 1.0, 0.0)
    stream = 0
    for n in range(1, order + 1):
        graphs = (graphs_by_order or {}).get(n) or enumerate_graphs(n, 2, max_in_degree_aerial=1)
        factor = _aerial_factor(n)
        for canonical, multiplicity in sorted(canonical_classes(graphs).items()):
            stream += 1
            graph = AdmissibleGraph(n, 2, canonical)
            operator = bidiff_apply(g, graph, f1, f2)
            if operator.is_zero():
                continue
            key = (n, canonical)
            estimate = weight_cache.get(key) if weight_cache is not None else None
            if estimate is None:
                estimate = mc_weight(graph, samples, [seed, stream], workers)
                if weight_cache is not None:
                    weight_cache[key] = estimate
            result.estimates.append(estimate)
            scale = float(factor * multiplicity)
            result.add(operator, estimate.mean * scale, estimate.stderr * scale)
        logger.info("graph star order %d: %d weights estimated so far", n, len(result.estimates))
    return result
