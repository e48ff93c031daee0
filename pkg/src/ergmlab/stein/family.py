"""
Nonlinear exponential families: Y has density proportional to h(x) = exp(g(x))
with respect to a product law of independent coordinates X.

Callbacks work on 2-D arrays whose rows are states, so estimators can batch
many perturbed states into one call.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional

import numpy as np

from ..errors import DomainError
from ..graphs import EdgeGraph, edge_pairs, edge_total, is_single_edge, rooted_count_adjacency
from ..model import ErgmSpec, RegionReport, centered_tilt_g, solve_fixed_point
from ..oracle import build
from ..sampling import Purpose, iter_chain, stream
from ..utils.config import get_config

logger = logging.getLogger(__name__)

RowFunction = Callable[[np.ndarray], np.ndarray]
Sampler = Callable[[np.random.Generator, int], np.ndarray]


@dataclass(frozen=True)
class ExactLaw:
    """Every state of an enumerable family with its tilted and baseline probabilities"""
    states: np.ndarray
    tilted_probs: np.ndarray
    baseline_probs: np.ndarray


@dataclass
class TiltedFamily:
    """
    Family description consumed by the Stein estimators.

    Attributes:
        baseline: Draws i.i.d. rows of X
        f: Statistic W = f(Y), centered under the tilted law
        g: Exponential tilt
        tilted: Draws rows of Y
        d_star: Uniform bound on |f(X^[i]) - f(X^[i-1])|
        delta1_fast / delta2_fast: Closed-form Delta_{1,i} / Delta_{2,i} for
            every coordinate of every row, shape (rows, N)
        exact: Optional full enumeration
    """
    name: str
    dimension: int
    baseline: Sampler
    f: RowFunction
    g: RowFunction
    tilted: Sampler
    d_star: float
    delta1_fast: Optional[RowFunction] = None
    delta2_fast: Optional[RowFunction] = None
    exact: Optional[ExactLaw] = None
    metadata: Dict[str, Any] = field(default_factory=dict)


def _bernoulli_sampler(p: float, size: int) -> Sampler:
    def draw(rng: np.random.Generator, count: int) -> np.ndarray:
        return (rng.random((count, size)) < p).astype(np.int8)
    return draw


def ergm_family(
    spec: ErgmSpec,
    n: int,
    report: Optional[RegionReport] = None,
    mu: Optional[float] = None,
    pilot_draws: int = 2000,
    seed: int = 0,
) -> TiltedFamily:
    """
    The ERGM edge statistic as a tilted Bernoulli(p) family.

    The ERGM equals h * Bernoulli(p)^N / a with g the centered tilt, f the
    standardized edge count (sum y - mu_n) / sigma_n. For n within the
    enumeration cap mu_n and the tilted law are exact; otherwise Y comes
    from a Glauber chain and mu_n from a pilot run unless given.
    """
    report = report or solve_fixed_point(spec)
    p = report.require_subcritical()
    size = edge_total(n)
    sigma = float(np.sqrt(report.sigma_sq(n)))
    pairs = edge_pairs(n)
    config = get_config()
    weights = 1 << np.arange(size, dtype=np.int64)
    metadata: Dict[str, Any] = {"n": n, "p": p, "sigma_sq": sigma ** 2}

    exact_measure = build(spec, n) if n <= config.exact_max_n else None
    if exact_measure is not None:
        mu = exact_measure.mean_edges
        tilt_table = np.array(
            [centered_tilt_g(spec, report, exact_measure.graph(k)) for k in range(exact_measure.states)]
        )
        metadata["mu_source"] = "exact"

        def g(rows: np.ndarray) -> np.ndarray:
            return tilt_table[np.atleast_2d(rows).astype(np.int64) @ weights]

        def tilted(rng: np.random.Generator, count: int) -> np.ndarray:
            return exact_measure.indicators[exact_measure.draw_codes(count, rng)].astype(np.int8)

        baseline_probs = np.prod(
            np.where(exact_measure.indicators == 1, p, 1.0 - p), axis=1
        )
        exact = ExactLaw(exact_measure.indicators.astype(np.int8), exact_measure.probs, baseline_probs)
    else:
        exact = None

        def g(rows: np.ndarray) -> np.ndarray:
            rows = np.atleast_2d(rows)
            return np.array(
                [centered_tilt_g(spec, report, EdgeGraph.from_array(n, row)) for row in rows]
            )

        def tilted(rng: np.random.Generator, count: int) -> np.ndarray:
            chain_seed = int(rng.integers(2**62))
            return np.array(
                [graph.to_array() for graph in iter_chain(spec, n, None, 1, count, chain_seed)],
                dtype=np.int8,
            )

        if mu is None:
            pilot = tilted(stream(seed, Purpose.STEIN, n, 1), pilot_draws)
            mu = float(pilot.sum(axis=1).mean())
            metadata["mu_source"] = f"pilot ({pilot_draws} draws)"
        else:
            metadata["mu_source"] = "given"
    metadata["mu"] = mu

    def f(rows: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(rows).sum(axis=1) - mu) / sigma

    def delta1_fast(rows: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(rows)
        return ((1.0 - 2.0 * p) * rows + p) / (2.0 * sigma ** 2)

    interaction = [
        (c, t, 2.0 * beta * t.e * p ** (t.e - 1))
        for c, t, beta in zip(spec.scales(n), spec.templates, spec.betas)
        if not is_single_edge(t)
    ]

    def delta2_fast(rows: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(rows)
        out = np.zeros(rows.shape, dtype=float)
        for r, row in enumerate(rows):
            adj = EdgeGraph.from_array(n, row).adjacency
            for index, (i, j) in enumerate(pairs):
                c_s = sum(
                    c * rooted_count_adjacency(t, n, adj, i - 1, j - 1) - lead
                    for c, t, lead in interaction
                )
                out[r, index] = ((1.0 - 2.0 * p) * row[index] + p) * c_s
        return out / (2.0 * sigma)

    return TiltedFamily(
        name="ergm-edge",
        dimension=size,
        baseline=_bernoulli_sampler(p, size),
        f=f,
        g=g,
        tilted=tilted,
        d_star=1.0 / sigma,
        delta1_fast=delta1_fast,
        delta2_fast=delta2_fast,
        exact=exact,
        metadata=metadata,
    )


def check_dimension(family: TiltedFamily, rows: np.ndarray) -> np.ndarray:
    rows = np.atleast_2d(rows)
    if rows.shape[1] != family.dimension:
        raise DomainError(f"Rows have {rows.shape[1]} coordinates, family has {family.dimension}")
    return rows
