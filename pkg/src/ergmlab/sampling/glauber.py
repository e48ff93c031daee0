"""
Glauber dynamics for the ERGM.

One step picks an edge I uniformly and a uniform U, and sets
Y_I = 1{U <= expit(Delta_I T(y))}. A sweep is N steps. Step t of a chain
uses entry t mod N of the randomness for sweep t // N.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional

import numpy as np
from scipy.special import expit

from ..errors import DomainError, ExactSizeError
from ..graphs import EdgeGraph, MutableGraph, edge_pairs, edge_total
from ..model import ConditionalOdds, ErgmSpec, hom_vector
from ..utils.config import get_config
from .rng import Purpose, resolve_seed, stream, sweep_randomness

logger = logging.getLogger(__name__)


@dataclass
class ChainState:
    """Current graph of one chain plus its position in the random stream"""
    graph: MutableGraph
    seed: int
    chain_id: int = 0
    steps: int = 0
    _sweep: int = field(default=-1, repr=False)
    _edges: Optional[np.ndarray] = field(default=None, repr=False)
    _uniforms: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def start(cls, initial: EdgeGraph, seed: int, chain_id: int = 0) -> "ChainState":
        return cls(MutableGraph(initial), int(seed), chain_id)

    @property
    def n(self) -> int:
        return self.graph.n

    def snapshot(self) -> EdgeGraph:
        return self.graph.freeze()

    def next_draw(self):
        """(edge index, uniform) for the current step."""
        size = edge_total(self.graph.n)
        sweep, offset = divmod(self.steps, size)
        if sweep != self._sweep:
            self._edges, self._uniforms = sweep_randomness(
                self.seed, Purpose.CHAIN, (self.chain_id, sweep), size
            )
            self._sweep = sweep
        return int(self._edges[offset]), float(self._uniforms[offset])


def _apply(graph: MutableGraph, odds: ConditionalOdds, pairs, index: int, u: float) -> None:
    i, j = pairs[index]
    graph.set_edge(index, i, j, u <= expit(odds(graph.adj, i, j)))


def glauber_step(spec: ErgmSpec, state: ChainState, odds: Optional[ConditionalOdds] = None) -> ChainState:
    """Advance ``state`` by one heat-bath update and return it."""
    odds = odds or ConditionalOdds(spec, state.n)
    index, u = state.next_draw()
    _apply(state.graph, odds, edge_pairs(state.n), index, u)
    state.steps += 1
    return state


def run_sweeps(spec: ErgmSpec, state: ChainState, sweeps: int, odds: Optional[ConditionalOdds] = None) -> None:
    odds = odds or ConditionalOdds(spec, state.n)
    pairs = edge_pairs(state.n)
    for _ in range(sweeps * edge_total(state.n)):
        index, u = state.next_draw()
        _apply(state.graph, odds, pairs, index, u)
        state.steps += 1


def default_burn_in_sweeps(n: int) -> int:
    """ceil(n^2 log n) single-edge updates, rounded up to whole sweeps"""
    updates = math.ceil(n * n * math.log(n))
    return max(1, math.ceil(updates / edge_total(n)))


def effective_sample_size(trace, batch_count: Optional[int] = None) -> float:
    """
    Batch-means effective sample size of a scalar trace.

    Returns the trace length when the trace is constant or too short to batch.
    """
    x = np.asarray(trace, dtype=float)
    m = len(x)
    batch_count = batch_count or get_config().batch_count
    size = m // batch_count
    if size < 2:
        return float(m)
    variance = x.var(ddof=1)
    if variance == 0.0:
        return float(m)
    means = x[: size * batch_count].reshape(batch_count, size).mean(axis=1)
    long_run = size * means.var(ddof=1)
    if long_run <= 0.0:
        return float(m)
    return float(min(m, m * variance / long_run))


@dataclass
class SampleRun:
    """Thinned output of one chain together with the knobs that produced it"""
    graphs: List[EdgeGraph]
    metadata: Dict[str, Any]

    @property
    def edge_counts(self) -> np.ndarray:
        return np.array([g.edge_count for g in self.graphs], dtype=np.int64)

    @property
    def ess(self) -> float:
        return effective_sample_size(self.edge_counts)

    def hom_table(self, spec: ErgmSpec) -> np.ndarray:
        return np.array([hom_vector(spec, g) for g in self.graphs], dtype=np.int64)


def iter_chain(
    spec: ErgmSpec,
    n: int,
    burn_in_sweeps: Optional[int],
    thin_sweeps: int,
    count: int,
    seed: int,
    chain_id: int = 0,
    initial: Optional[EdgeGraph] = None,
) -> Iterator[EdgeGraph]:
    """Yield ``count`` thinned graphs from one chain after burn-in."""
    burn = default_burn_in_sweeps(n) if burn_in_sweeps is None else burn_in_sweeps
    if burn < 1 or thin_sweeps < 1:
        raise DomainError(f"burn-in and thinning must be >= 1 sweep, got {burn} and {thin_sweeps}")
    odds = ConditionalOdds(spec, n)
    state = ChainState.start(initial or EdgeGraph.empty(n), seed, chain_id)
    run_sweeps(spec, state, burn, odds)
    for _ in range(count):
        run_sweeps(spec, state, thin_sweeps, odds)
        yield state.snapshot()


def sample(
    spec: ErgmSpec,
    n: int,
    burn_in_sweeps: Optional[int],
    thin_sweeps: int,
    count: int,
    seed: Optional[int],
    chain_id: int = 0,
    initial: Optional[EdgeGraph] = None,
) -> SampleRun:
    """
    Draw ``count`` graphs from a single Glauber chain.

    Args:
        spec: Model
        n: Vertex count
        burn_in_sweeps: Sweeps discarded first; None selects the default
        thin_sweeps: Sweeps between retained graphs
        count: Number of retained graphs
        seed: Stream seed; None draws one and records it
        chain_id: Stream id for independent replicates
        initial: Starting graph (default empty)

    Returns:
        SampleRun with the graphs and every knob in its metadata
    """
    seed = resolve_seed(seed)
    burn = default_burn_in_sweeps(n) if burn_in_sweeps is None else burn_in_sweeps
    logger.info(
        f"Glauber chain {chain_id}: n={n}, burn-in {burn} sweeps, thin {thin_sweeps}, "
        f"count {count}, seed {seed}"
    )
    graphs = list(iter_chain(spec, n, burn, thin_sweeps, count, seed, chain_id, initial))
    run = SampleRun(
        graphs,
        {
            "sampler": "glauber",
            "n": n,
            "burn_in_sweeps": burn,
            "thin_sweeps": thin_sweeps,
            "count": count,
            "seed": seed,
            "chain_id": chain_id,
            "initial_edges": (initial or EdgeGraph.empty(n)).edge_count,
        },
    )
    ess = run.ess if count else 0.0
    run.metadata["ess"] = ess
    if count and ess < get_config().min_ess:
        message = f"Chain {chain_id} effective sample size {ess:.1f} below {get_config().min_ess}"
        run.metadata["warning"] = message
        logger.warning(message)
    return run


def glauber_kernel(spec: ErgmSpec, n: int) -> np.ndarray:
    """
    Exact single-step transition matrix on all 2^N graphs.

    Row and column k correspond to the graph whose bit vector is k.
    """
    if n > 4:
        raise ExactSizeError(f"Transition matrices are built for n <= 4, got {n}")
    size = edge_total(n)
    pairs = edge_pairs(n)
    odds = ConditionalOdds(spec, n)
    states = 1 << size
    kernel = np.zeros((states, states))
    for x in range(states):
        adj = EdgeGraph(n, x).adjacency
        for index, (i, j) in enumerate(pairs):
            up = float(expit(odds(adj, i, j)))
            kernel[x, x | (1 << index)] += up / size
            kernel[x, x & ~(1 << index)] += (1.0 - up) / size
    return kernel


def er_sample(n: int, p: float, seed: int, draw: int = 0) -> EdgeGraph:
    """Erdos-Renyi G(n, p) graph."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"Edge probability must lie in [0, 1], got {p}")
    rng = stream(seed, Purpose.ERDOS_RENYI, draw)
    return EdgeGraph.from_array(n, (rng.random(edge_total(n)) < p).astype(np.uint8))
