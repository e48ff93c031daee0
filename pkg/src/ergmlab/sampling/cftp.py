"""
Perfect sampling by coupling from the past.

The upper chain starts from the complete graph and the lower chain from the
empty graph at time -T sweeps. Both consume the same (I, U) pairs, keyed by
(seed, draw, sweep-back index), so doubling T reuses the randomness of the
recent past. With every beta_j >= 0 (j >= 2) the update is monotone and the
lower chain never leaves the upper one; once they agree at time 0 every
starting state agrees.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

from scipy.special import expit

from ..errors import CoalescenceTimeoutError, LabError, UnsupportedRegimeError
from ..graphs import EdgeGraph, MutableGraph, edge_pairs, edge_total
from ..model import ConditionalOdds, ErgmSpec
from ..utils.config import get_config
from .rng import Purpose, resolve_seed, sweep_randomness

logger = logging.getLogger(__name__)


@dataclass
class CouplingState:
    """Sandwiching pair of chains driven by shared randomness"""
    lower: MutableGraph
    upper: MutableGraph
    seed: int
    draw: int = 0

    @classmethod
    def extremes(cls, n: int, seed: int, draw: int = 0) -> "CouplingState":
        return cls(MutableGraph(EdgeGraph.empty(n)), MutableGraph(EdgeGraph.complete(n)), seed, draw)

    @property
    def coalesced(self) -> bool:
        return self.lower.bits == self.upper.bits

    @property
    def disagreements(self) -> int:
        return (self.upper.bits ^ self.lower.bits).bit_count()

    def check_order(self) -> None:
        if self.lower.bits & ~self.upper.bits:
            raise LabError(
                f"Monotone coupling violated: {(self.lower.bits & ~self.upper.bits).bit_count()} "
                "edges present below but absent above"
            )


def _run_from(
    odds: ConditionalOdds, n: int, seed: int, draw: int, horizon: int, check: bool
) -> CouplingState:
    size = edge_total(n)
    pairs = edge_pairs(n)
    state = CouplingState.extremes(n, seed, draw)
    lower, upper = state.lower, state.upper
    merged = False
    for back in range(horizon - 1, -1, -1):
        edges, uniforms = sweep_randomness(seed, Purpose.CFTP, (draw, back), size)
        for index, u in zip(edges.tolist(), uniforms.tolist()):
            i, j = pairs[index]
            upper.set_edge(index, i, j, u <= expit(odds(upper.adj, i, j)))
            if merged:
                continue
            lower.set_edge(index, i, j, u <= expit(odds(lower.adj, i, j)))
            if check:
                state.check_order()
            if lower.bits == upper.bits:
                merged = True
    if merged:
        state.lower = MutableGraph(upper.freeze())
    return state


def cftp_sample(
    spec: ErgmSpec,
    n: int,
    seed: Optional[int],
    draw: int = 0,
    max_sweeps: Optional[int] = None,
) -> EdgeGraph:
    """
    Exact draw from the ERGM.

    Args:
        spec: Model with every beta_j >= 0 for j >= 2
        n: Vertex count
        seed: Stream seed
        draw: Index of the draw; distinct draws use disjoint randomness
        max_sweeps: Largest past horizon tried (default from config)

    Raises:
        UnsupportedRegimeError: Some interaction parameter is negative
        CoalescenceTimeoutError: No coalescence within ``max_sweeps``
    """
    if not spec.monotone:
        raise UnsupportedRegimeError(
            f"Coupling from the past needs beta_j >= 0 for j >= 2, got {spec.betas}"
        )
    config = get_config()
    seed = resolve_seed(seed)
    limit = max_sweeps or config.max_cftp_sweeps
    odds = ConditionalOdds(spec, n)
    horizon = 1
    while True:
        state = _run_from(odds, n, seed, draw, horizon, config.check_monotone)
        if state.coalesced:
            logger.debug(f"CFTP draw {draw} coalesced with horizon {horizon} sweeps")
            return state.upper.freeze()
        if horizon >= limit:
            raise CoalescenceTimeoutError(
                f"No coalescence within {limit} sweeps (n={n}, betas={spec.betas})",
                diagnostics={
                    "horizon_sweeps": horizon,
                    "disagreements": state.disagreements,
                    "lower_edges": state.lower.bits.bit_count(),
                    "upper_edges": state.upper.bits.bit_count(),
                    "seed": seed,
                    "draw": draw,
                },
            )
        horizon = min(2 * horizon, limit)


def cftp_draws(spec: ErgmSpec, n: int, count: int, seed: Optional[int]) -> List[EdgeGraph]:
    """``count`` independent exact draws, draw k keyed by k."""
    seed = resolve_seed(seed)
    logger.info(f"CFTP: {count} draws at n={n}, seed {seed}")
    return [cftp_sample(spec, n, seed, draw=k) for k in range(count)]
