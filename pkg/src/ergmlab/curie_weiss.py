"""
Curie-Weiss model without external field, beta in (0, 1).

Spins x in {-1, 1}^N, magnetization s(x) = sum x_i, tilt
h(x) = exp(beta s^2 / (2N)) against the uniform law. The tilt depends on x
only through s, so the law of s is exact on N + 1 points and, given s, the
spin pattern is a uniform arrangement.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from scipy.special import gammaln, logsumexp

from .distances import DiscreteLaw, loglog_slope
from .errors import DomainError
from .stein.family import ExactLaw, TiltedFamily

logger = logging.getLogger(__name__)

# Largest N whose 2^N spin patterns are enumerated for exact checks
ENUMERATION_MAX_N = 12


@dataclass(frozen=True)
class CwMeasure:
    """Exact law of the magnetization"""
    N: int
    beta: float
    support: np.ndarray   # s = -N, -N+2, ..., N
    probs: np.ndarray

    @property
    def sigma_sq(self) -> float:
        return self.N / (1.0 - self.beta)

    @property
    def mean(self) -> float:
        return float(np.dot(self.support, self.probs))

    @property
    def variance(self) -> float:
        return float(np.dot(self.support.astype(float) ** 2, self.probs) - self.mean ** 2)

    @property
    def variance_ratio(self) -> float:
        """Var(s) / sigma_N^2"""
        return self.variance / self.sigma_sq

    def w_law(self) -> DiscreteLaw:
        return DiscreteLaw(self.support / np.sqrt(self.sigma_sq), self.probs)

    def draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Exact spin patterns: magnetization by inverse CDF, then a uniform arrangement."""
        ups = (self.support[rng.choice(len(self.probs), size=count, p=self.probs)] + self.N) // 2
        ranks = np.argsort(rng.random((count, self.N)), axis=1).argsort(axis=1)
        return np.where(ranks < ups[:, None], 1, -1).astype(np.int8)


def build_cw(N: int, beta: float) -> CwMeasure:
    """
    Exact magnetization law, weights C(N, (N+s)/2) exp(beta s^2 / (2N)).

    Raises:
        DomainError: N < 1 or beta outside (0, 1)
    """
    if N < 1:
        raise DomainError(f"Particle count must be positive, got {N}")
    if not 0.0 < beta < 1.0:
        raise DomainError(f"Inverse temperature must lie in (0, 1), got {beta}")
    ups = np.arange(N + 1)
    support = 2 * ups - N
    log_w = (
        gammaln(N + 1) - gammaln(ups + 1) - gammaln(N - ups + 1)
        + beta * support.astype(float) ** 2 / (2.0 * N)
    )
    probs = np.exp(log_w - logsumexp(log_w))
    return CwMeasure(N, float(beta), support, probs)


def exact_distances(measure: CwMeasure) -> Tuple[float, float]:
    """(d_K, d_W) between W = s / sigma_N and N(0, 1)"""
    law = measure.w_law()
    return law.kolmogorov(), law.wasserstein()


def cw_family(N: int, beta: float) -> TiltedFamily:
    """Rademacher baseline, g = beta s^2 / (2N), f = s / sigma_N."""
    measure = build_cw(N, beta)
    sigma = float(np.sqrt(measure.sigma_sq))

    def baseline(rng: np.random.Generator, count: int) -> np.ndarray:
        return (2 * (rng.random((count, N)) < 0.5) - 1).astype(np.int8)

    def magnetization(rows: np.ndarray) -> np.ndarray:
        return np.atleast_2d(rows).sum(axis=1).astype(float)

    def f(rows: np.ndarray) -> np.ndarray:
        return magnetization(rows) / sigma

    def g(rows: np.ndarray) -> np.ndarray:
        return beta * magnetization(rows) ** 2 / (2.0 * N)

    def delta1_fast(rows: np.ndarray) -> np.ndarray:
        return np.full(np.atleast_2d(rows).shape, 1.0 / sigma ** 2)

    def delta2_fast(rows: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(rows)
        return beta * (magnetization(rows)[:, None] - rows) / (N * sigma)

    exact = None
    if N <= ENUMERATION_MAX_N:
        states = np.array(list(itertools.product((-1, 1), repeat=N)), dtype=np.int8)
        log_h = g(states)
        tilted = np.exp(log_h - logsumexp(log_h))
        exact = ExactLaw(states, tilted, np.full(len(states), 2.0 ** -N))

    return TiltedFamily(
        name="curie-weiss",
        dimension=N,
        baseline=baseline,
        f=f,
        g=g,
        tilted=measure.draw,
        d_star=2.0 / sigma,
        delta1_fast=delta1_fast,
        delta2_fast=delta2_fast,
        exact=exact,
        metadata={"N": N, "beta": beta, "sigma_sq": measure.sigma_sq},
    )


def cw_rate_scan(Ns: Sequence[int], beta: float) -> Dict[str, Any]:
    """Exact d_K and d_W across N with fitted log-log slopes."""
    rows: List[Dict[str, float]] = []
    for N in Ns:
        measure = build_cw(N, beta)
        d_k, d_w = exact_distances(measure)
        rows.append({
            "N": N,
            "dK": d_k,
            "dW": d_w,
            "dK_sqrtN": d_k * np.sqrt(N),
            "variance_ratio": measure.variance_ratio,
        })
    report: Dict[str, Any] = {"beta": beta, "rows": rows}
    if len(Ns) >= 3:
        report["dK_slope"] = loglog_slope(Ns, [r["dK"] for r in rows]).to_dict()
        report["dW_slope"] = loglog_slope(Ns, [r["dW"] for r in rows]).to_dict()
        scaled = [r["dK_sqrtN"] for r in rows]
        report["dK_sqrtN_band_ratio"] = max(scaled) / min(scaled)
    logger.info(f"Curie-Weiss scan beta={beta}: {[round(r['dK'], 6) for r in rows]}")
    return report
