"""
Hoeffding building blocks g_I, product expansions and residual-variance scans.

For an index set I of distinct edges with |I| <= 4,

    g_I(y) = sum over set partitions P of I of
             (-1)^M(P) { M(P) 1[N(P) = 0] + prod_{singletons {l}} (y_l - p~) 1[N(P) > 0] }
             * prod_{blocks J, |J| > 1} E prod_{l in J} (Y_l - p~)

where N(P) counts singleton blocks, M(P) counts larger blocks and
p~ = E Y_l. The "original" multiplicity variant uses 1[N(P) = 0] in place of
M(P) 1[N(P) = 0]; only the amended form is centered for |I| = 4.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .distances import loglog_slope
from .errors import DomainError, MissingMomentError
from .graphs import EdgeGraph, Template, hom_count
from .model import ErgmSpec, RegionReport, solve_fixed_point
from .oracle import ExactMeasure
from .sampling import sample_replicates
from .utils.config import get_config

logger = logging.getLogger(__name__)

MAX_ORDER = 4

Block = Tuple[int, ...]


@lru_cache(maxsize=None)
def set_partitions(size: int) -> Tuple[Tuple[Block, ...], ...]:
    """All set partitions of {0, ..., size-1}; Bell numbers 1, 1, 2, 5, 15."""
    if size == 0:
        return ((),)
    out = []
    for partition in set_partitions(size - 1):
        new = size - 1
        out.append(partition + ((new,),))
        for k in range(len(partition)):
            out.append(partition[:k] + (partition[k] + (new,),) + partition[k + 1:])
    return tuple(out)


@dataclass
class MomentContext:
    """p~ and centered joint moments E prod_{l in J} (Y_l - p~), keyed by edge-index sets"""
    p_tilde: float
    moments: Dict[FrozenSet[int], float]
    source: str
    se: Dict[FrozenSet[int], float] = field(default_factory=dict)

    def moment(self, block: Iterable[int]) -> float:
        return self.moments[frozenset(block)]

    def require(self, blocks: Iterable[FrozenSet[int]]) -> None:
        missing = [b for b in blocks if b not in self.moments]
        if missing:
            raise MissingMomentError(missing)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p_tilde": self.p_tilde,
            "source": self.source,
            "moments": {",".join(map(str, sorted(k))): v for k, v in self.moments.items()},
        }


def _subsets(edges: Sequence[int], min_size: int = 1) -> List[FrozenSet[int]]:
    return [
        frozenset(c)
        for r in range(min_size, len(edges) + 1)
        for c in itertools.combinations(edges, r)
    ]


def _indicator_rows(y) -> np.ndarray:
    if isinstance(y, EdgeGraph):
        return y.to_array()[None, :].astype(float)
    return np.atleast_2d(np.asarray(y, dtype=float))


def moment_context_from_measure(measure: ExactMeasure, edges: Sequence[int],
                                p_tilde: Optional[float] = None) -> MomentContext:
    """Exact centered moments for every nonempty subset of ``edges``."""
    _check_edges(edges)
    ind = measure.indicators.astype(float)
    if p_tilde is None:
        p_tilde = float(np.dot(measure.probs, ind[:, edges[0]]))
    centered = ind - p_tilde
    moments = {
        subset: float(np.dot(measure.probs, np.prod(centered[:, sorted(subset)], axis=1)))
        for subset in _subsets(edges)
    }
    return MomentContext(p_tilde, moments, "exact")


def moment_context_from_samples(rows, edges: Sequence[int],
                                p_tilde: Optional[float] = None) -> MomentContext:
    """Monte-Carlo centered moments; p~ defaults to the overall edge density."""
    _check_edges(edges)
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if p_tilde is None:
        p_tilde = float(rows.mean())
    centered = rows - p_tilde
    moments, se = {}, {}
    for subset in _subsets(edges):
        values = np.prod(centered[:, sorted(subset)], axis=1)
        moments[subset] = float(values.mean())
        se[subset] = float(values.std(ddof=1) / np.sqrt(len(values))) if len(values) > 1 else float("nan")
    return MomentContext(p_tilde, moments, f"monte-carlo ({len(rows)} samples)", se)


def _check_edges(edges: Sequence[int]) -> None:
    if len(edges) == 0:
        raise DomainError("Index set must be nonempty")
    if len(edges) > MAX_ORDER:
        raise DomainError(f"Index sets are limited to {MAX_ORDER} edges, got {len(edges)}")
    if len(set(edges)) != len(edges):
        raise DomainError(f"Index set has repeated edges: {list(edges)}")


@dataclass
class HoeffdingTerm:
    """Index set I with the moments needed to evaluate g_I"""
    edges: Tuple[int, ...]
    context: MomentContext
    multiplicity: Optional[str] = None  # "amended" or "original"; None reads config

    def __post_init__(self):
        self.edges = tuple(int(e) for e in self.edges)
        _check_edges(self.edges)
        if self.multiplicity is None:
            self.multiplicity = get_config().hoeffding_multiplicity
        if self.multiplicity not in ("amended", "original"):
            raise DomainError(f"Unknown multiplicity convention '{self.multiplicity}'")
        self.context.require(
            frozenset(self.edges[k] for k in block)
            for partition in set_partitions(len(self.edges))
            for block in partition
            if len(block) > 1
        )

    @property
    def d(self) -> int:
        return len(self.edges)

    def __call__(self, y) -> Union[float, np.ndarray]:
        return g_I(self, y)


def g_I(term: HoeffdingTerm, y) -> Union[float, np.ndarray]:
    """Evaluate g_I on a graph, an indicator vector, or rows of indicator vectors."""
    rows = _indicator_rows(y)
    centered = rows[:, list(term.edges)] - term.context.p_tilde
    total = np.zeros(len(rows))
    for partition in set_partitions(term.d):
        big = [block for block in partition if len(block) > 1]
        singles = [block[0] for block in partition if len(block) == 1]
        m = len(big)
        if singles:
            inner = np.prod(centered[:, singles], axis=1)
        else:
            inner = np.full(len(rows), float(m) if term.multiplicity == "amended" else 1.0)
        weight = (-1.0) ** m
        for block in big:
            weight *= term.context.moment(term.edges[k] for k in block)
        total += weight * inner
    return float(total[0]) if isinstance(y, EdgeGraph) or np.ndim(y) == 1 else total


@dataclass(frozen=True)
class ProductExpansion:
    """Y_{s_1}...Y_{s_m} - E[.] = sum_{S nonempty} p~^(m-|S|) (prod_S Y~ - E prod_S Y~)"""
    edges: Tuple[int, ...]
    p_tilde: float
    terms: Tuple[Tuple[float, Tuple[int, ...]], ...]

    def polynomial(self, y) -> Union[float, np.ndarray]:
        """p~^m + sum_S coeff prod_S (y - p~); equals prod y_s identically."""
        rows = _indicator_rows(y)
        values = np.full(len(rows), self.p_tilde ** len(self.edges))
        for coeff, subset in self.terms:
            values += coeff * np.prod(rows[:, list(subset)] - self.p_tilde, axis=1)
        return float(values[0]) if np.ndim(y) == 1 or isinstance(y, EdgeGraph) else values

    def centered(self, y, context: MomentContext) -> Union[float, np.ndarray]:
        """Right-hand side with E prod_S Y~ taken from ``context``."""
        rows = _indicator_rows(y)
        values = np.zeros(len(rows))
        for coeff, subset in self.terms:
            values += coeff * (
                np.prod(rows[:, list(subset)] - self.p_tilde, axis=1) - context.moment(subset)
            )
        return float(values[0]) if np.ndim(y) == 1 or isinstance(y, EdgeGraph) else values

    def to_dict(self) -> Dict[str, Any]:
        return {
            "edges": list(self.edges),
            "p_tilde": self.p_tilde,
            "terms": [{"coefficient": c, "subset": list(s)} for c, s in self.terms],
        }


def expand_product(edges: Sequence[int], p_tilde: float) -> ProductExpansion:
    """Coefficient list of the centered product over centered monomials."""
    _check_edges(edges)
    m = len(edges)
    terms = tuple(
        (p_tilde ** (m - len(subset)), tuple(subset))
        for r in range(1, m + 1)
        for subset in itertools.combinations(edges, r)
    )
    return ProductExpansion(tuple(edges), float(p_tilde), terms)


def completed_expansion(edges: Sequence[int], context: MomentContext, y) -> Dict[str, Any]:
    """
    Replace every centered monomial of the product expansion by its g_S completion.

    Returns the exact centered product, the completed sum and their difference.
    """
    expansion = expand_product(edges, context.p_tilde)
    rows = _indicator_rows(y)
    exact = expansion.centered(rows, context)
    completed = np.zeros(len(rows))
    for coeff, subset in expansion.terms:
        completed += coeff * g_I(HoeffdingTerm(subset, context), rows)
    residual = exact - completed
    return {
        "exact": exact.tolist(),
        "completed": completed.tolist(),
        "max_abs_residual": float(np.max(np.abs(residual))),
    }


def centering_check(measure: ExactMeasure, edges: Sequence[int], max_order: int = 3,
                    multiplicity: Optional[str] = None) -> Dict[str, Any]:
    """E g_I under the enumerated measure for every I within ``edges`` of size <= max_order."""
    context = moment_context_from_measure(measure, edges)
    means = {}
    for subset in _subsets(edges):
        if len(subset) > max_order:
            continue
        term = HoeffdingTerm(tuple(sorted(subset)), context, multiplicity)
        means[",".join(map(str, term.edges))] = float(np.dot(measure.probs, g_I(term, measure.indicators)))
    worst = max(abs(v) for v in means.values())
    return {"p_tilde": context.p_tilde, "means": means, "max_abs_mean": worst}


def _central_abs_third(values: np.ndarray) -> float:
    return float(np.mean(np.abs(values - values.mean()) ** 3))


def residual_variance_scan(
    spec: ErgmSpec,
    template: Template,
    ns: Sequence[int],
    samples: int,
    seed: int,
    burn_in_sweeps: Optional[int] = None,
    thin_sweeps: int = 1,
    chains: int = 1,
    report: Optional[RegionReport] = None,
) -> Dict[str, Any]:
    """
    Variance of |Hom(H, G_Y)| minus its leading edge-indexed Hoeffding term.

    The residual is |Hom| - 2 n^(v-2) e p^(e-1) (sum Y - mu^), mu^ the sample
    mean edge count. Log-log slopes of the raw and residual variances across
    n are fitted; third absolute central moments are reported without a fit.

    Raises:
        NotSubcriticalError: the model is not subcritical
        DomainError: fewer than three sizes
    """
    report = report or solve_fixed_point(spec)
    p = report.require_subcritical()
    if len(ns) < 3:
        raise DomainError(f"A scaling scan needs at least 3 sizes, got {list(ns)}")
    v, e = template.v, template.e
    rows = []
    for n in ns:
        per_chain = -(-samples // chains)
        runs = sample_replicates(spec, n, burn_in_sweeps, thin_sweeps, per_chain, chains, seed)
        graphs = [g for run in runs for g in run.graphs][:samples]
        homs = np.array([hom_count(template, g) for g in graphs], dtype=float)
        edges = np.array([g.edge_count for g in graphs], dtype=float)
        lead = 2.0 * n ** (v - 2) * e * p ** (e - 1)
        residual = homs - lead * (edges - edges.mean())
        raw_var = float(homs.var(ddof=1))
        res_var = float(residual.var(ddof=1))
        rows.append({
            "n": n,
            "raw_variance": raw_var,
            "residual_variance": res_var,
            "ratio": res_var / raw_var if raw_var > 0 else float("nan"),
            "raw_third_moment": _central_abs_third(homs),
            "residual_third_moment": _central_abs_third(residual),
            "min_ess": min(run.ess for run in runs),
        })
        logger.info(f"Residual scan n={n}: raw var {raw_var:.4g}, residual var {res_var:.4g}")

    result: Dict[str, Any] = {
        "template": template.to_dict(),
        "betas": list(spec.betas),
        "p": p,
        "samples": samples,
        "seed": seed,
        "rows": rows,
        "predicted_raw_slope": 2 * v - 2,
        "predicted_residual_slope": (2 * v - 3) if report.dobrushin else (2 * v - 2.5),
    }
    raw = [r["raw_variance"] for r in rows]
    res = [r["residual_variance"] for r in rows]
    if all(x > 0 for x in raw):
        result["raw_slope"] = loglog_slope(ns, raw).to_dict()
    # Residuals of the edge template are constant
    if all(x > 1e-9 * max(raw) for x in res) and "raw_slope" in result:
        result["residual_slope"] = loglog_slope(ns, res).to_dict()
        result["slope_gap"] = result["raw_slope"]["slope"] - result["residual_slope"]["slope"]
    else:
        result["residual_slope"] = None
        result["slope_gap"] = None
    return result
