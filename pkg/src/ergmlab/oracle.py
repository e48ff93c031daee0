"""
Exact ERGM measure by exhaustive enumeration (n <= 6, at most 2^15 graphs).

Graph number k is the EdgeGraph whose bit vector equals k.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from .distances import DiscreteLaw
from .errors import DomainError, ExactSizeError
from .graphs import EdgeGraph, EdgeId, edge_total
from .model import ErgmSpec, hom_vector, log_weight
from .utils.config import get_config

logger = logging.getLogger(__name__)


@dataclass
class ExactMeasure:
    """Enumerated ERGM law on all graphs with n vertices"""
    spec: ErgmSpec
    n: int
    hom_table: np.ndarray       # (2^N, k) hom counts
    log_weights: np.ndarray     # (2^N,) T(y)
    log_Z: float
    probs: np.ndarray
    _indicators: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return edge_total(self.n)

    @property
    def states(self) -> int:
        return len(self.probs)

    @property
    def edge_counts(self) -> np.ndarray:
        return self.hom_table[:, 0] // 2

    @property
    def indicators(self) -> np.ndarray:
        """(2^N, N) edge indicators"""
        if self._indicators is None:
            codes = np.arange(self.states, dtype=np.int64)
            self._indicators = ((codes[:, None] >> np.arange(self.size)) & 1).astype(np.uint8)
        return self._indicators

    def graph(self, code: int) -> EdgeGraph:
        return EdgeGraph(self.n, int(code))

    # --- expectations -----------------------------------------------------

    def expect(self, fn: Callable[[EdgeGraph], float]) -> float:
        """E fn(Y) by a full sweep over all graphs."""
        values = np.array([fn(self.graph(k)) for k in range(self.states)], dtype=float)
        return self.expect_values(values)

    def expect_values(self, values) -> float:
        return float(np.dot(self.probs, np.asarray(values, dtype=float)))

    @property
    def mean_edges(self) -> float:
        """mu_n = E sum Y_s"""
        return self.expect_values(self.edge_counts)

    def marginal(self, s: EdgeId) -> float:
        return float(np.dot(self.probs, self.indicators[:, s.index]))

    def edge_count_law(self) -> np.ndarray:
        """P(E = m) for m = 0..N"""
        return np.bincount(self.edge_counts, weights=self.probs, minlength=self.size + 1)

    def hom_moments(self, j: int) -> Tuple[float, float]:
        """(E |Hom(H_j, Y)|, E |Hom(H_j, Y)|^2) for template index j (0-based)"""
        column = self.hom_table[:, j].astype(float)
        return self.expect_values(column), self.expect_values(column ** 2)

    def total_variation(self, counts) -> float:
        """TV distance between an empirical edge-count histogram and the exact law."""
        counts = np.asarray(counts, dtype=float)
        if counts.shape != (self.size + 1,):
            counts = np.bincount(np.asarray(counts, dtype=np.int64), minlength=self.size + 1)
        empirical = counts / counts.sum()
        return float(0.5 * np.abs(empirical - self.edge_count_law()).sum())

    # --- sampling ---------------------------------------------------------

    def draw_codes(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.choice(self.states, size=count, p=self.probs)

    def draw(self, count: int, rng: np.random.Generator) -> List[EdgeGraph]:
        """Exact i.i.d. draws."""
        return [self.graph(int(k)) for k in self.draw_codes(count, rng)]

    # --- second accumulation ---------------------------------------------

    def log_partition_pairwise(self) -> float:
        """log Z recomputed per graph and reduced in reverse pairwise order."""
        values = [log_weight(self.spec, self.graph(k)) for k in range(self.states - 1, -1, -1)]
        while len(values) > 1:
            merged = [np.logaddexp(values[i], values[i + 1]) for i in range(0, len(values) - 1, 2)]
            if len(values) % 2:
                merged.append(values[-1])
            values = merged
        return float(values[0])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "betas": list(self.spec.betas),
            "log_Z": self.log_Z,
            "mu": self.mean_edges,
            "edge_count_law": self.edge_count_law().tolist(),
            "hom_moments": [list(self.hom_moments(j)) for j in range(self.spec.k)],
        }


def build(spec: ErgmSpec, n: int) -> ExactMeasure:
    """
    Enumerate every graph on n vertices.

    Raises:
        ExactSizeError: n above the enumeration cap
    """
    cap = get_config().exact_max_n
    if n > cap:
        raise ExactSizeError(f"Exact enumeration is capped at n={cap}, got {n}")
    if spec.max_vertices > n:
        raise DomainError(f"Templates with {spec.max_vertices} vertices do not fit n={n}")
    states = 1 << edge_total(n)
    hom_table = np.array([hom_vector(spec, EdgeGraph(n, k)) for k in range(states)], dtype=np.int64)
    log_weights = hom_table @ np.asarray(spec.scales(n))
    log_Z = float(logsumexp(log_weights))
    probs = np.exp(log_weights - log_Z)
    logger.info(f"Enumerated {states} graphs at n={n}: log Z = {log_Z:.12g}")
    return ExactMeasure(spec, n, hom_table, log_weights, log_Z, probs)


Condition = Union[Mapping[EdgeId, int], Iterable[Tuple[EdgeId, int]]]


def _normalize_condition(condition: Condition) -> Dict[int, int]:
    items = condition.items() if isinstance(condition, Mapping) else condition
    fixed: Dict[int, int] = {}
    for edge, value in items:
        value = int(value)
        if value not in (0, 1):
            raise DomainError(f"Edge values must be 0 or 1, got {value} for {edge.endpoints}")
        if fixed.get(edge.index, value) != value:
            raise DomainError(f"Contradictory condition on edge {edge.endpoints}")
        fixed[edge.index] = value
    return fixed


def exact_conditional(measure: ExactMeasure, s: EdgeId, condition: Condition = ()) -> float:
    """P(Y_s = 1 | condition) by summing weights of consistent graphs."""
    fixed = _normalize_condition(condition)
    if s.index in fixed:
        raise DomainError(f"Edge {s.endpoints} is part of the condition")
    mask = np.ones(measure.states, dtype=bool)
    for index, value in fixed.items():
        mask &= measure.indicators[:, index] == value
    weights = measure.probs[mask]
    return float(np.dot(weights, measure.indicators[mask, s.index]) / weights.sum())


def exact_W_law(measure: ExactMeasure, sigma_sq: float) -> DiscreteLaw:
    """Law of W = (sum Y_s - mu_n) / sigma_n with the exact mu_n."""
    law = measure.edge_count_law()
    support = (np.arange(measure.size + 1) - measure.mean_edges) / np.sqrt(sigma_sq)
    return DiscreteLaw.of(support, law)
