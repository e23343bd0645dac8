"""Monte-Carlo integration of products of propagator forms over configuration spaces.

Ground points are pinned (0 and 1 for graphs with two ground vertices, the
hub i for wheels), which leaves the aerial points free in the upper
half-plane. Each aerial point is drawn from the unit square through the
chart (a, b) -> the point seen under angles pi*min(a, b) from 0 and
pi*max(a, b) from 1; the chart covers the half-plane twice and its
Jacobian is folded into the integrand.

Random streams: the root ``SeedSequence`` is spawned once per worker and
every worker drives a Philox generator, so a run is fixed by
(seed, samples, workers). Worker statistics are merged in worker order.
"""
import logging
import math
import time
from multiprocessing import Pool
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from src.errors import DegenerateForm
from src.graphs.admissible import AdmissibleGraph
from src.models import WeightEstimate
from src.types import MC_BATCH_SIZE, WheelIntegrand

logger = logging.getLogger(__name__)

Entropy = Union[int, Sequence[int]]

# Half-plane chart: each point costs a factor pi^2 / 2 from the square
CHART_FACTOR = math.pi**2 / 2


class _StreamTask(NamedTuple):
    n: int
    edges: Tuple[Tuple[int, int], ...]
    fixed: Tuple[complex, ...]
    samples: int
    seed: np.random.SeedSequence
    absolute: bool
    replaced: Optional[int] = None


class RunningStats(NamedTuple):
    count: int
    mean: float
    m2: float

    @classmethod
    def of(cls, values: np.ndarray) -> "RunningStats":
        if values.size == 0:
            return cls(0, 0.0, 0.0)
        mean = float(values.mean())
        return cls(int(values.size), mean, float(((values - mean) ** 2).sum()))

    def merge(self, other: "RunningStats") -> "RunningStats":
        """Pairwise (Chan et al.) update of count, mean and squared deviations."""
        if other.count == 0:
            return self
        if self.count == 0:
            return other
        count = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / count
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / count
        return RunningStats(count, mean, m2)

    @property
    def stderr(self) -> float:
        if self.count < 2:
            return 0.0
        return math.sqrt(self.m2 / (self.count - 1)) / math.sqrt(self.count)


def sample_chart(rng: np.random.Generator, size: int, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Aerial points of shape (size, n) and the chart Jacobian of each sample."""
    theta = np.pi * np.sort(rng.random((size, n, 2)), axis=-1)
    theta0, theta1 = theta[..., 0], theta[..., 1]
    z = (np.sin(theta1) / np.sin(theta1 - theta0)) * np.exp(1j * theta0)
    jacobian = CHART_FACTOR * np.abs(z) ** 2 * np.abs(z - 1) ** 2 / z.imag
    return z, np.prod(jacobian, axis=1)


def pullback_density(
    z: np.ndarray,
    fixed: Sequence[complex],
    edges: Sequence[Tuple[int, int]],
    replaced: Optional[int] = None,
) -> np.ndarray:
    """det of d(phi_e)/d(x_0, y_0, x_1, y_1, ...) with rows in edge order.

    Targets >= n refer to ``fixed[target - n]``. The row of edge ``replaced``
    becomes d arg(z_source - 1) / pi, which is d max(a, b) in the chart.
    """
    size, n = z.shape
    jac = np.zeros((size, len(edges), 2 * n))
    for e, (source, target) in enumerate(edges):
        zs = z[:, source]
        if e == replaced:
            inv_w = 1.0 / (zs - 1.0)
            jac[:, e, 2 * source] = inv_w.imag / np.pi
            jac[:, e, 2 * source + 1] = inv_w.real / np.pi
            continue
        zt = z[:, target] if target < n else fixed[target - n]
        inv_w = 1.0 / (zs - zt)
        inv_wbar = 1.0 / (np.conj(zs) - zt)
        jac[:, e, 2 * source] += (inv_w.imag - inv_wbar.imag) / (2 * np.pi)
        jac[:, e, 2 * source + 1] += (inv_w.real + inv_wbar.real) / (2 * np.pi)
        if target < n:
            jac[:, e, 2 * target] += (inv_wbar.imag - inv_w.imag) / (2 * np.pi)
            jac[:, e, 2 * target + 1] += (inv_wbar.real - inv_w.real) / (2 * np.pi)
    return np.linalg.det(jac)


def _run_stream(task: _StreamTask) -> RunningStats:
    rng = np.random.Generator(np.random.Philox(task.seed))
    stats = RunningStats(0, 0.0, 0.0)
    remaining = task.samples
    while remaining > 0:
        size = min(MC_BATCH_SIZE, remaining)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            z, jacobian = sample_chart(rng, size, task.n)
            values = pullback_density(z, task.fixed, task.edges, task.replaced) * jacobian
        if task.absolute:
            values = np.abs(values)
        # Samples on the chart boundary have measure zero
        values[~np.isfinite(values)] = 0.0
        stats = stats.merge(RunningStats.of(values))
        remaining -= size
    return stats


def _split(samples: int, workers: int) -> List[int]:
    base, extra = divmod(samples, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def integrate_form(
    n: int,
    edges: Sequence[Tuple[int, int]],
    fixed: Sequence[complex],
    samples: int,
    seed: Entropy,
    workers: int = 1,
    absolute: bool = False,
    replaced: Optional[int] = None,
) -> RunningStats:
    """Mean and spread of the pulled-back density over the chart."""
    if workers < 1:
        raise ValueError("workers must be at least 1")
    children = np.random.SeedSequence(seed).spawn(workers)
    tasks = [
        _StreamTask(n, tuple(edges), tuple(complex(p) for p in fixed), count, child, absolute, replaced)
        for count, child in zip(_split(samples, workers), children)
    ]
    if workers == 1:
        results = [_run_stream(tasks[0])]
    else:
        with Pool(processes=workers) as pool:
            results = pool.map(_run_stream, tasks)
    total = RunningStats(0, 0.0, 0.0)
    for stats in results:
        total = total.merge(stats)
    return total


def _graph_edges(graph: AdmissibleGraph) -> List[Tuple[int, int]]:
    return [(v, t) for v, _, t in graph.edge_list()]


def _seed_value(seed: Entropy) -> int:
    if isinstance(seed, int):
        return seed
    return int(np.random.SeedSequence(seed).generate_state(1, dtype=np.uint64)[0])


def mc_weight(
    graph: AdmissibleGraph,
    samples: int,
    seed: Entropy,
    workers: int = 1,
    fixed: Optional[Sequence[complex]] = None,
) -> WeightEstimate:
    """Monte-Carlo estimate of the weight of a graph with two ground vertices.

    ``seed`` is an integer or an entropy sequence; the estimate records the
    integer it reduces to.
    """
    if graph.num_edges != 2 * graph.n:
        raise DegenerateForm(f"graph {graph} has {graph.num_edges} edges, the form needs {2 * graph.n}")
    if fixed is None:
        if graph.m != 2:
            raise DegenerateForm("weights are integrated with ground points pinned at 0 and 1")
        fixed = (0.0, 1.0)
    started = time.perf_counter()
    label = graph.canonical().to_text()
    if graph.n == 0:
        return WeightEstimate(graph=label, n=0, mean=1.0, stderr=0.0, samples=samples, seed=_seed_value(seed), workers=workers)
    stats = integrate_form(graph.n, _graph_edges(graph), fixed, samples, seed, workers)
    elapsed = (time.perf_counter() - started) * 1000
    logger.info("weight of %s: %.6f +- %.6f (%d samples)", label, stats.mean, stats.stderr, stats.count)
    return WeightEstimate(
        graph=label,
        n=graph.n,
        mean=stats.mean,
        stderr=stats.stderr,
        samples=stats.count,
        seed=_seed_value(seed),
        workers=workers,
        elapsed_ms=elapsed,
    )


def wheel_graph(spokes: int) -> AdmissibleGraph:
    """k rim vertices in a cycle, each sending its second edge to the hub (ground vertex g0)."""
    if spokes < 2:
        raise ValueError("a wheel needs at least two spokes")
    hub = spokes
    return AdmissibleGraph(spokes, 1, tuple(((v + 1) % spokes, hub) for v in range(spokes)))


def wheel_weight_check(
    spokes: int,
    samples: int,
    seed: Entropy,
    workers: int = 1,
    integrand: WheelIntegrand = WheelIntegrand.SIGNED,
) -> WeightEstimate:
    """Weight of the wheel with inward spokes, the hub pinned at i.

    ``ABSOLUTE`` integrates |density|, strictly positive for a live integrator.
    ``CONSTANT_SPOKE`` swaps the spoke of rim vertex 0 for a form that is
    constant in the chart; the signed integral no longer vanishes, so a sign
    or orientation bug that zeroes the integrand shows up as a zero estimate.
    """
    graph = wheel_graph(spokes)
    edges = _graph_edges(graph)
    replaced = edges.index((0, spokes)) if integrand is WheelIntegrand.CONSTANT_SPOKE else None
    started = time.perf_counter()
    stats = integrate_form(
        spokes, edges, (1j,), samples, seed, workers,
        absolute=integrand is WheelIntegrand.ABSOLUTE, replaced=replaced,
    )
    elapsed = (time.perf_counter() - started) * 1000
    label = graph.to_text() if integrand is WheelIntegrand.SIGNED else f"{graph.to_text()} [{integrand.value}]"
    logger.info("wheel %d (%s): %.6f +- %.6f", spokes, integrand.value, stats.mean, stats.stderr)
    return WeightEstimate(
        graph=label,
        n=spokes,
        mean=stats.mean,
        stderr=stats.stderr,
        samples=stats.count,
        seed=_seed_value(seed),
        workers=workers,
        elapsed_ms=elapsed,
    )
