"""
Distances between a law and the standard normal.

Exact versions work on discrete laws (support points with probabilities);
empirical versions work on samples.
"""

import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Sequence, Tuple

import numpy as np
from scipy import stats


def _merge_support(support, probs) -> Tuple[np.ndarray, np.ndarray]:
    support = np.asarray(support, dtype=float)
    probs = np.asarray(probs, dtype=float)
    order = np.argsort(support, kind="stable")
    support, probs = support[order], probs[order]
    points, inverse = np.unique(support, return_inverse=True)
    return points, np.bincount(inverse, weights=probs, minlength=len(points))


def discrete_kolmogorov(support, probs) -> float:
    """sup_x |F(x) - Phi(x)|, checking both sides of every jump."""
    points, mass = _merge_support(support, probs)
    after = np.cumsum(mass)
    before = after - mass
    normal = stats.norm.cdf(points)
    return float(max(np.max(np.abs(after - normal)), np.max(np.abs(before - normal))))


def _normal_cdf_integral(x: float) -> float:
    """Antiderivative of Phi: x Phi(x) + phi(x)"""
    return x * stats.norm.cdf(x) + stats.norm.pdf(x)


def discrete_wasserstein(support, probs) -> float:
    """integral |F(x) - Phi(x)| dx, in closed form piece by piece."""
    points, mass = _merge_support(support, probs)
    levels = np.cumsum(mass)
    first, last = float(points[0]), float(points[-1])
    total = _normal_cdf_integral(first)
    total += stats.norm.pdf(last) - last * stats.norm.sf(last)
    for a, b, c in zip(points[:-1], points[1:], levels[:-1]):
        a, b = float(a), float(b)
        c = min(max(float(c), 0.0), 1.0)
        if c <= 0.0:
            m = a
        elif c >= 1.0:
            m = b
        else:
            m = min(max(float(stats.norm.ppf(c)), a), b)
        below = c * (m - a) - (_normal_cdf_integral(m) - _normal_cdf_integral(a))
        above = (_normal_cdf_integral(b) - _normal_cdf_integral(m)) - c * (b - m)
        total += below + above
    return float(total)


def empirical_kolmogorov(sample) -> float:
    return float(stats.kstest(np.asarray(sample, dtype=float), "norm").statistic)


def empirical_wasserstein(sample) -> float:
    """Mean |x_(i) - Phi^{-1}((i - 1/2) / m)| over the sorted sample"""
    x = np.sort(np.asarray(sample, dtype=float))
    m = len(x)
    quantiles = stats.norm.ppf((np.arange(1, m + 1) - 0.5) / m)
    return float(np.mean(np.abs(x - quantiles)))


def dkw_band(samples: int, alpha: float = 0.05) -> float:
    """Half-width of the Dvoretzky-Kiefer-Wolfowitz confidence band"""
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * samples))


def bootstrap_se(
    sample, statistic: Callable[[np.ndarray], float], rng: np.random.Generator, reps: int = 200
) -> float:
    x = np.asarray(sample, dtype=float)
    values = [statistic(x[rng.integers(0, len(x), size=len(x))]) for _ in range(reps)]
    return float(np.std(values, ddof=1))


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares line through (log x, log y)"""
    slope: float
    intercept: float
    stderr: float
    ci_low: float
    ci_high: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "stderr": self.stderr,
            "ci95": [self.ci_low, self.ci_high],
        }


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> SlopeFit:
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    fit = stats.linregress(lx, ly)
    dof = len(lx) - 2
    half = float(stats.t.ppf(0.975, dof) * fit.stderr) if dof > 0 else float("inf")
    return SlopeFit(float(fit.slope), float(fit.intercept), float(fit.stderr),
                    float(fit.slope) - half, float(fit.slope) + half)


@dataclass(frozen=True)
class DiscreteLaw:
    """Finite law on the real line"""
    support: np.ndarray
    probs: np.ndarray

    @classmethod
    def of(cls, support, probs) -> "DiscreteLaw":
        points, mass = _merge_support(support, probs)
        return cls(points, mass)

    @property
    def mean(self) -> float:
        return float(np.dot(self.support, self.probs))

    @property
    def variance(self) -> float:
        return float(np.dot((self.support - self.mean) ** 2, self.probs))

    def kolmogorov(self) -> float:
        return discrete_kolmogorov(self.support, self.probs)

    def wasserstein(self) -> float:
        return discrete_wasserstein(self.support, self.probs)

    def to_dict(self) -> Dict[str, Any]:
        return {"support": self.support.tolist(), "probs": self.probs.tolist()}
