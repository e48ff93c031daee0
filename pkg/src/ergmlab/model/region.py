"""
Fixed-point equation, region classification and asymptotic variance.

Phi(a) = sum_j beta_j e_j a^(e_j - 1) and phi(a) = expit(2 Phi(a)). The model
is subcritical when phi(a) = a has a unique root p in (0, 1) with
phi'(p) < 1; Dobrushin's condition is Phi'(1) < 2.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import bisect, minimize_scalar
from scipy.special import expit

from ..errors import DomainError, LabError, NotSubcriticalError
from ..graphs import edge_total
from ..utils.config import get_config
from .spec import ErgmSpec

logger = logging.getLogger(__name__)


class Classification(str, Enum):
    SUBCRITICAL = "Subcritical"
    SUBCRITICAL_AND_DOBRUSHIN = "SubcriticalAndDobrushin"
    NOT_SUBCRITICAL = "NotSubcritical"
    INDETERMINATE = "Indeterminate"


def _check_unit(a) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr)):
        raise DomainError(f"Argument must lie in [0, 1], got {a}")
    return arr


def Phi(spec: ErgmSpec, a):
    arr = _check_unit(a)
    out = np.zeros_like(arr)
    for beta, e in zip(spec.betas, spec.edge_counts):
        out = out + beta * e * arr ** (e - 1)
    return out if out.ndim else float(out)


def Phi_prime(spec: ErgmSpec, a):
    arr = _check_unit(a)
    out = np.zeros_like(arr)
    for beta, e in zip(spec.betas, spec.edge_counts):
        if e >= 2:
            out = out + beta * e * (e - 1) * arr ** (e - 2)
    return out if out.ndim else float(out)


def phi(spec: ErgmSpec, a):
    out = expit(2.0 * np.asarray(Phi(spec, a)))
    return out if np.ndim(out) else float(out)


def phi_prime(spec: ErgmSpec, a):
    value = np.asarray(phi(spec, a))
    out = 2.0 * value * (1.0 - value) * np.asarray(Phi_prime(spec, a))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class RootInfo:
    """One solution of phi(a) = a"""
    value: float
    phi_prime: float
    # |2 Phi(p) - logit(p)| scaled by p(1 - p)
    identity_residual: float


@dataclass
class RegionReport:
    """Roots of the fixed-point equation and the resulting classification"""
    spec: ErgmSpec
    roots: Tuple[RootInfo, ...]
    classification: Classification
    dobrushin_value: float
    tol: float
    warnings: List[str] = field(default_factory=list)

    @property
    def is_subcritical(self) -> bool:
        return self.classification in (
            Classification.SUBCRITICAL,
            Classification.SUBCRITICAL_AND_DOBRUSHIN,
        )

    @property
    def dobrushin(self) -> bool:
        return self.classification == Classification.SUBCRITICAL_AND_DOBRUSHIN

    @property
    def p(self) -> Optional[float]:
        """The unique root when subcritical"""
        return self.roots[0].value if self.is_subcritical else None

    @property
    def phi_prime_at_p(self) -> Optional[float]:
        return self.roots[0].phi_prime if self.is_subcritical else None

    def require_subcritical(self) -> float:
        """Return p, or raise NotSubcriticalError."""
        if not self.is_subcritical:
            raise NotSubcriticalError(
                f"Parameters {self.spec.betas} are not subcritical "
                f"(classification {self.classification.value}, {len(self.roots)} roots)"
            )
        return self.roots[0].value

    def sigma_sq(self, n: int) -> float:
        return sigma_n_sq(self.spec, self, n)

    def to_dict(self, n: Optional[int] = None) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "betas": list(self.spec.betas),
            "edge_counts": list(self.spec.edge_counts),
            "roots": [
                {"p": r.value, "phi_prime": r.phi_prime, "identity_residual": r.identity_residual}
                for r in self.roots
            ],
            "p": self.p,
            "phi_prime": self.phi_prime_at_p,
            "classification": self.classification.value,
            "dobrushin_value": self.dobrushin_value,
            "dobrushin": self.dobrushin_value < 2.0,
            "tol": self.tol,
            "warnings": list(self.warnings),
        }
        if n is not None and self.is_subcritical:
            out["n"] = n
            out["sigma_sq"] = self.sigma_sq(n)
        return out


def _merge(values: List[float], merge_tol: float) -> List[float]:
    merged: List[float] = []
    for value in sorted(values):
        if merged and value - merged[-1] < merge_tol:
            continue
        merged.append(value)
    return merged


def solve_fixed_point(spec: ErgmSpec, tol: Optional[float] = None) -> RegionReport:
    """
    Locate every root of phi(a) - a in (0, 1) and classify the parameters.

    A uniform grid is scanned for sign changes and each bracket refined by
    bisection. A grid local minimum of |phi(a) - a| that stays below the
    tangency tolerance without a sign change makes the result Indeterminate.

    Args:
        spec: Model parameters
        tol: Bisection tolerance (default from config)

    Returns:
        RegionReport with roots, phi' at each root and the classification
    """
    config = get_config()
    tol = config.solver_tol if tol is None else tol
    if tol <= 0:
        raise DomainError(f"Tolerance must be positive, got {tol}")

    def gap(a: float) -> float:
        return phi(spec, a) - a

    grid = np.linspace(0.0, 1.0, config.grid_points + 1)
    values = np.asarray(phi(spec, grid)) - grid
    warnings: List[str] = []

    candidates: List[float] = []
    bracketed = np.zeros(len(grid), dtype=bool)
    for k in range(len(grid) - 1):
        lo, hi = values[k], values[k + 1]
        if lo == 0.0:
            candidates.append(float(grid[k]))
            bracketed[k] = True
        elif lo * hi < 0.0:
            candidates.append(bisect(gap, grid[k], grid[k + 1], xtol=tol, rtol=4 * np.finfo(float).eps))
            bracketed[k] = bracketed[k + 1] = True
    roots = _merge(candidates, config.root_merge_tol)

    # Touching without crossing
    tangent = False
    magnitude = np.abs(values)
    for k in range(1, len(grid) - 1):
        if bracketed[k - 1] or bracketed[k] or bracketed[k + 1]:
            continue
        if magnitude[k] <= magnitude[k - 1] and magnitude[k] <= magnitude[k + 1]:
            result = minimize_scalar(
                lambda a: abs(gap(a)),
                bounds=(grid[k - 1], grid[k + 1]),
                method="bounded",
                options={"xatol": tol},
            )
            if result.fun < config.tangency_tol:
                tangent = True
                warnings.append(f"Near-tangency of phi(a) and a at a={result.x:.6g}")
                logger.warning(warnings[-1])

    infos = []
    for p in roots:
        residual = abs(2.0 * Phi(spec, p) - math.log(p / (1.0 - p))) * p * (1.0 - p)
        if residual >= 10 * tol:
            message = f"Fixed-point identity residual {residual:.3e} at p={p:.12g} exceeds {10 * tol:.1e}"
            warnings.append(message)
            logger.warning(message)
        infos.append(RootInfo(float(p), float(phi_prime(spec, p)), float(residual)))

    dobrushin_value = float(Phi_prime(spec, 1.0))
    if tangent:
        classification = Classification.INDETERMINATE
    elif len(infos) == 1:
        if infos[0].phi_prime < 1.0 - config.subcritical_margin:
            classification = (
                Classification.SUBCRITICAL_AND_DOBRUSHIN
                if dobrushin_value < 2.0
                else Classification.SUBCRITICAL
            )
        else:
            classification = Classification.INDETERMINATE
            warnings.append(f"Single root with phi'(p)={infos[0].phi_prime:.6g} at the boundary")
    else:
        classification = Classification.NOT_SUBCRITICAL

    subcritical = classification in (
        Classification.SUBCRITICAL,
        Classification.SUBCRITICAL_AND_DOBRUSHIN,
    )
    if dobrushin_value < 2.0 and not subcritical:
        warnings.append(
            f"Dobrushin condition holds (Phi'(1)={dobrushin_value:.6g}) but classification "
            f"is {classification.value}"
        )
        logger.warning(warnings[-1])

    logger.info(
        f"Fixed point for betas={spec.betas}: {len(infos)} root(s) "
        f"{[round(r.value, 10) for r in infos]}, {classification.value}"
    )
    return RegionReport(spec, tuple(infos), classification, dobrushin_value, tol, warnings)


def sigma_n_sq(spec: ErgmSpec, report: RegionReport, n: int) -> float:
    """
    Asymptotic variance of the edge count.

    sigma_n^2 = N p(1-p) / (1 - sum_{j>=2} beta_j e_j (e_j - 1) 2 p^(e_j - 1) (1 - p)).
    """
    p = report.require_subcritical()
    denominator = 1.0 - sum(
        beta * e * (e - 1) * 2.0 * p ** (e - 1) * (1.0 - p)
        for beta, e in zip(spec.betas[1:], spec.edge_counts[1:])
    )
    expected = 1.0 - report.roots[0].phi_prime
    if abs(denominator - expected) > 1e-10 * max(1.0, abs(denominator)):
        raise LabError(
            f"Variance denominator {denominator!r} disagrees with 1 - phi'(p) = {expected!r}"
        )
    return edge_total(n) * p * (1.0 - p) / denominator
