"""
Monte-Carlo estimators of the Stein quantities b, delta_2, delta_3 and
order-of-magnitude diagnostics for the delta_1 terms.

With X' an independent copy of X, X^(i) replaces coordinate i of X by X'_i
and X^[i] keeps X_1..X_i and takes X'_{i+1}..X'_N. Then

    Delta_{1,i}(x) = 1/2 E[(f(X) - f(X^(i))) (f(X^[i]) - f(X^[i-1])) | X = x]
    Delta_{2,i}(x) = 1/2 E[(g(X) - g(X^(i))) (f(X^[i]) - f(X^[i-1])) | X = x]

Standard errors come from batch means over the outer draws.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from ..errors import PreconditionError
from ..utils.config import get_config
from .family import TiltedFamily, check_dimension

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Estimate:
    value: float
    se: float

    def to_dict(self) -> Dict[str, float]:
        return {"value": self.value, "se": self.se}


@dataclass
class SteinEstimates:
    """Estimates of b, delta_2 and delta_3 from one batch of tilted draws"""
    b: Estimate
    delta2: Estimate
    delta3: Estimate
    outer_draws: int
    inner_draws: int
    fast_path: bool
    diagnostics: Optional[Dict[str, Any]] = None
    exact: Optional[Dict[str, float]] = None
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "b": self.b.to_dict(),
            "delta2": self.delta2.to_dict(),
            "delta3": self.delta3.to_dict(),
            "outer_draws": self.outer_draws,
            "inner_draws": self.inner_draws,
            "fast_path": self.fast_path,
            "diagnostics": self.diagnostics,
            "exact": self.exact,
            "warnings": list(self.warnings),
        }


# --- batch means -----------------------------------------------------------

def _batches(values: np.ndarray) -> List[np.ndarray]:
    count = min(get_config().batch_count, max(2, len(values) // 2))
    return np.array_split(values, count)


def batch_mean(values) -> Estimate:
    values = np.asarray(values, dtype=float)
    means = np.array([chunk.mean() for chunk in _batches(values)])
    return Estimate(float(values.mean()), float(means.std(ddof=1) / np.sqrt(len(means))))


def batch_sd(values) -> Estimate:
    """Sample sd with the se taken from the spread of per-batch sds"""
    values = np.asarray(values, dtype=float)
    sds = np.array([chunk.std(ddof=1) for chunk in _batches(values)])
    return Estimate(float(values.std(ddof=1)), float(sds.std(ddof=1) / np.sqrt(len(sds))))


def _weighted_batch_mean(values: np.ndarray, log_h: np.ndarray) -> Estimate:
    """Self-normalized importance mean of ``values`` with weights exp(log_h)."""
    def ratio(v, lw):
        w = np.exp(lw - lw.max())
        return float(np.dot(w, v) / w.sum())

    chunks = np.array_split(np.arange(len(values)), min(get_config().batch_count, max(2, len(values) // 2)))
    per_batch = np.array([ratio(values[c], log_h[c]) for c in chunks])
    return Estimate(ratio(values, log_h), float(per_batch.std(ddof=1) / np.sqrt(len(per_batch))))


# --- perturbed states -------------------------------------------------------

def _single_swaps(x: np.ndarray, xp: np.ndarray) -> np.ndarray:
    """Rows X^(i), i = 1..N"""
    rows = np.tile(x, (len(x), 1))
    np.fill_diagonal(rows, xp)
    return rows


def _interpolants(x: np.ndarray, xp: np.ndarray) -> np.ndarray:
    """Rows X^[k], k = 0..N"""
    size = len(x)
    mask = np.arange(size)[None, :] < np.arange(size + 1)[:, None]
    return np.where(mask, x[None, :], xp[None, :])


def _coordinate_terms(family: TiltedFamily, x: np.ndarray, xp: np.ndarray, with_g: bool):
    """Per-coordinate f(X) - f(X^(i)), g(X) - g(X^(i)) and f(X^[i]) - f(X^[i-1])."""
    swaps = _single_swaps(x, xp)
    f_x = family.f(x[None, :])[0]
    df = f_x - family.f(swaps)
    dfb = np.diff(family.f(_interpolants(x, xp)))
    dg = family.g(x[None, :])[0] - family.g(swaps) if with_g else None
    return df, dg, dfb


def _mc_delta_sums(family: TiltedFamily, x: np.ndarray, inner: int, rng: np.random.Generator,
                   with_g: bool) -> Tuple[float, float]:
    total1 = total2 = 0.0
    for xp in family.baseline(rng, inner):
        df, dg, dfb = _coordinate_terms(family, x, xp, with_g)
        total1 += 0.5 * float(np.dot(df, dfb))
        if with_g:
            total2 += 0.5 * float(np.dot(dg, dfb))
    return total1 / inner, total2 / inner


def delta_sums(family: TiltedFamily, rows: np.ndarray, inner_draws: int, rng: np.random.Generator,
               need_delta2: bool = True) -> Tuple[np.ndarray, np.ndarray]:
    """sum_i Delta_{1,i} and sum_i Delta_{2,i} for every row, by fast path when declared."""
    rows = check_dimension(family, rows)
    if family.delta1_fast is not None:
        s1 = family.delta1_fast(rows).sum(axis=1)
    else:
        s1 = None
    if need_delta2 and family.delta2_fast is not None:
        s2 = family.delta2_fast(rows).sum(axis=1)
    else:
        s2 = None
    if s1 is None or (need_delta2 and s2 is None):
        mc = np.array([
            _mc_delta_sums(family, row, inner_draws, rng, need_delta2 and s2 is None) for row in rows
        ])
        s1 = mc[:, 0] if s1 is None else s1
        if need_delta2 and s2 is None:
            s2 = mc[:, 1]
    return s1, (s2 if need_delta2 else np.zeros(len(rows)))


def _require_rng(rng: Optional[np.random.Generator]) -> np.random.Generator:
    if rng is None:
        raise PreconditionError("Resampling Delta_i needs an explicit generator")
    return rng


def delta1_i(family: TiltedFamily, x, i: int, inner_draws: int,
             rng: Optional[np.random.Generator] = None, use_fast_path: bool = True) -> float:
    """Delta_{1,i}(x), closed form when the family declares one."""
    x = check_dimension(family, x)[0]
    if use_fast_path and family.delta1_fast is not None:
        return float(family.delta1_fast(x[None, :])[0, i])
    return _delta_i(family, x, i, inner_draws, _require_rng(rng), family.f)


def delta2_i(family: TiltedFamily, x, i: int, inner_draws: int,
             rng: Optional[np.random.Generator] = None, use_fast_path: bool = True) -> float:
    """Delta_{2,i}(x), closed form when the family declares one."""
    x = check_dimension(family, x)[0]
    if use_fast_path and family.delta2_fast is not None:
        return float(family.delta2_fast(x[None, :])[0, i])
    return _delta_i(family, x, i, inner_draws, _require_rng(rng), family.g)


def _delta_i(family: TiltedFamily, x: np.ndarray, i: int, inner: int,
             rng: np.random.Generator, outer_fn: Callable) -> float:
    if inner < 1:
        raise PreconditionError(f"inner_draws must be >= 1, got {inner}")
    xp = family.baseline(rng, inner)
    swapped = np.tile(x, (inner, 1))
    swapped[:, i] = xp[:, i]
    upper = xp.copy()
    upper[:, : i + 1] = x[: i + 1]
    lower = xp.copy()
    lower[:, :i] = x[:i]
    diff_outer = outer_fn(x[None, :])[0] - outer_fn(swapped)
    diff_f = family.f(upper) - family.f(lower)
    return float(0.5 * np.mean(diff_outer * diff_f))


# --- estimators -------------------------------------------------------------

def _draw(family: TiltedFamily, outer: int, rng: np.random.Generator) -> np.ndarray:
    if outer < 4:
        raise PreconditionError(f"At least 4 outer draws are needed, got {outer}")
    return family.tilted(rng, outer)


def _check_b(b: Estimate, warnings: List[str]) -> None:
    if abs(b.value) <= 2 * b.se:
        message = f"b ~ 0 ({b.value:.4g} +/- {b.se:.2g}): the normal approximation bound degenerates"
        warnings.append(message)
        logger.warning(message)


def estimate_b(family: TiltedFamily, outer_draws: int, inner_draws: int,
               rng: np.random.Generator) -> Tuple[Estimate, List[str]]:
    """b = E sum_i Delta_{1,i}(Y), with a warning when b is indistinguishable from 0."""
    ys = _draw(family, outer_draws, rng)
    s1, _ = delta_sums(family, ys, inner_draws, rng, need_delta2=False)
    b = batch_mean(s1)
    warnings: List[str] = []
    _check_b(b, warnings)
    return b, warnings


def estimate_delta2(family: TiltedFamily, outer_draws: int, inner_draws: int,
                    rng: np.random.Generator) -> Estimate:
    """delta_2 = sd of sum_i Delta_{1,i}(Y)"""
    ys = _draw(family, outer_draws, rng)
    s1, _ = delta_sums(family, ys, inner_draws, rng, need_delta2=False)
    return batch_sd(s1)


def estimate_delta3(family: TiltedFamily, b: float, outer_draws: int, inner_draws: int,
                    rng: np.random.Generator) -> Estimate:
    """delta_3 = sd of sum_i Delta_{2,i}(Y) - (1 - b) f(Y)"""
    ys = _draw(family, outer_draws, rng)
    _, s2 = delta_sums(family, ys, inner_draws, rng)
    return batch_sd(s2 - (1.0 - b) * family.f(ys))


def estimate_all(family: TiltedFamily, outer_draws: int, inner_draws: Optional[int],
                 rng: np.random.Generator, diagnostics: bool = False,
                 diagnostic_draws: int = 200) -> SteinEstimates:
    """b, delta_2 and delta_3 from one shared batch of tilted draws."""
    inner = inner_draws or get_config().inner_draws
    ys = _draw(family, outer_draws, rng)
    s1, s2 = delta_sums(family, ys, inner, rng)
    warnings: List[str] = []
    b = batch_mean(s1)
    _check_b(b, warnings)
    result = SteinEstimates(
        b=b,
        delta2=batch_sd(s1),
        delta3=batch_sd(s2 - (1.0 - b.value) * family.f(ys)),
        outer_draws=outer_draws,
        inner_draws=inner,
        fast_path=family.delta1_fast is not None and family.delta2_fast is not None,
        warnings=warnings,
    )
    if family.exact is not None and result.fast_path:
        result.exact = exact_stein_quantities(family)
    if diagnostics:
        result.diagnostics = diagnostic_delta1(family, diagnostic_draws, rng, inner)
        result.warnings.extend(result.diagnostics["warnings"])
    logger.info(
        f"Stein estimates ({family.name}): b={b.value:.5g}+/-{b.se:.2g}, "
        f"delta2={result.delta2.value:.5g}, delta3={result.delta3.value:.5g}"
    )
    return result


def diagnostic_delta1(family: TiltedFamily, outer_draws: int, rng: np.random.Generator,
                      inner_draws: Optional[int] = None) -> Dict[str, Any]:
    """
    Magnitudes of the delta_1 and delta_1' terms.

    Expectations under h(X) are estimated by self-normalized importance
    weighting of baseline draws. These are diagnostics, not certified bounds.
    """
    inner = inner_draws or get_config().inner_draws
    xs = check_dimension(family, family.baseline(rng, outer_draws))
    log_h = family.g(xs).astype(float)
    terms = np.zeros((outer_draws, 4))
    for m, x in enumerate(xs):
        xp = family.baseline(rng, 1)[0]
        df, dg, dfb = _coordinate_terms(family, x, xp, with_g=True)
        boost = np.exp(np.abs(dg))
        terms[m, 0] = np.sum(df ** 2 * np.abs(dfb))
        terms[m, 1] = np.sum(boost * dg ** 2 * (np.abs(dg) + np.abs(df)) * np.abs(dfb))
        terms[m, 2] = np.sum(boost * family.d_star * np.abs(df) * np.abs(dg))
        # conditional mean over X' of sum_i D* (f(X) - f(X^(i)))
        f_x = family.f(x[None, :])[0]
        inner_sum = np.mean([
            np.sum(f_x - family.f(_single_swaps(x, xq))) for xq in family.baseline(rng, inner)
        ])
        terms[m, 3] = abs(family.d_star * inner_sum)

    estimates = [_weighted_batch_mean(terms[:, t], log_h) for t in range(4)]
    ess = float(np.exp(2 * logsumexp(log_h) - logsumexp(2 * log_h)))
    warnings: List[str] = []
    if ess < get_config().importance_min_ess:
        message = f"Importance weights have effective sample size {ess:.1f}; delta_1 diagnostics unreliable"
        warnings.append(message)
        logger.warning(message)
    first, tilt, dstar_tilt, dstar_mean = estimates
    return {
        "delta1": first.value + tilt.value,
        "delta1_prime": dstar_tilt.value + dstar_mean.value + tilt.value,
        "terms": {
            "f_increment": first.to_dict(),
            "tilt": tilt.to_dict(),
            "dstar_tilt": dstar_tilt.to_dict(),
            "dstar_mean": dstar_mean.to_dict(),
        },
        "importance_ess": ess,
        "outer_draws": outer_draws,
        "certified": False,
        "warnings": warnings,
    }


# --- exact quantities ----------------------------------------------------------

def exact_stein_quantities(family: TiltedFamily) -> Dict[str, float]:
    """Exact b, delta_2, delta_3 by enumeration, using the closed-form Delta terms."""
    if family.exact is None or family.delta1_fast is None or family.delta2_fast is None:
        raise PreconditionError(f"Family {family.name} is not enumerable with closed-form Delta terms")
    states, probs = family.exact.states, family.exact.tilted_probs
    s1 = family.delta1_fast(states).sum(axis=1)
    s2 = family.delta2_fast(states).sum(axis=1)
    b = float(np.dot(probs, s1))
    delta2 = float(np.sqrt(max(np.dot(probs, s1 ** 2) - b ** 2, 0.0)))
    residual = s2 - (1.0 - b) * family.f(states)
    mean_r = float(np.dot(probs, residual))
    delta3 = float(np.sqrt(max(np.dot(probs, residual ** 2) - mean_r ** 2, 0.0)))
    return {"b": b, "delta2": delta2, "delta3": delta3}


def transfer_check(family: TiltedFamily, fn: Callable[[np.ndarray], np.ndarray]) -> Tuple[float, float]:
    """
    (E fn(Y), (1/a) E[h(X) fn(X)]) computed exactly over all states.

    The two agree when the tilted law is h times the baseline law over a.
    """
    if family.exact is None:
        raise PreconditionError(f"Family {family.name} has no exact enumeration")
    states = family.exact.states
    values = np.asarray(fn(states), dtype=float)
    direct = float(np.dot(family.exact.tilted_probs, values))
    log_h = family.g(states).astype(float)
    h = np.exp(log_h - log_h.max()) * family.exact.baseline_probs
    return direct, float(np.dot(h, values) / h.sum())
