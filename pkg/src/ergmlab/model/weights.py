"""
Unnormalized log-weights T(y), conditional log-odds and the centered tilt.
"""

from typing import List, Sequence, Tuple

from ..graphs import (
    EdgeGraph,
    EdgeId,
    hom_count,
    is_single_edge,
    rooted_count_adjacency,
    rooted_hom_count,
)
from ..errors import DomainError
from .region import RegionReport
from .spec import ErgmSpec


def _check_host(spec: ErgmSpec, n: int) -> None:
    if spec.max_vertices > n:
        raise DomainError(f"Templates with {spec.max_vertices} vertices do not fit n={n}")


def hom_vector(spec: ErgmSpec, graph: EdgeGraph) -> Tuple[int, ...]:
    """|Hom(H_j, G)| for every model template"""
    _check_host(spec, graph.n)
    return tuple(
        2 * graph.edge_count if is_single_edge(t) else hom_count(t, graph)
        for t in spec.templates
    )


def log_weight(spec: ErgmSpec, graph: EdgeGraph) -> float:
    """T(y) = sum_j beta_j n^(2 - v_j) |Hom(H_j, G)|, without -log Z."""
    return sum(c * h for c, h in zip(spec.scales(graph.n), hom_vector(spec, graph)))


def cond_log_odds(spec: ErgmSpec, graph: EdgeGraph, s: EdgeId) -> float:
    """T(G with s) - T(G without s)"""
    _check_host(spec, graph.n)
    return sum(
        c * rooted_hom_count(t, graph, s) for c, t in zip(spec.scales(graph.n), spec.templates)
    )


class ConditionalOdds:
    """Conditional log-odds evaluator bound to one host size.

    Works on raw neighborhood bitsets so chains can call it without
    building EdgeGraph values.
    """

    def __init__(self, spec: ErgmSpec, n: int):
        _check_host(spec, n)
        self.n = n
        self.constant = 0.0
        self.terms: List[Tuple[float, object]] = []
        for c, t in zip(spec.scales(n), spec.templates):
            if is_single_edge(t):
                self.constant += 2.0 * c
            else:
                self.terms.append((c, t))

    def __call__(self, adj: Sequence[int], i: int, j: int) -> float:
        """Log-odds at the 1-based pair (i, j)."""
        total = self.constant
        for c, template in self.terms:
            total += c * rooted_count_adjacency(template, self.n, adj, i - 1, j - 1)
        return total


def centered_tilt_g(spec: ErgmSpec, report: RegionReport, graph: EdgeGraph) -> float:
    """
    Tilt g(y) with the leading Hoeffding term removed.

    g(y) = sum_j [beta_j n^(2 - v_j) |Hom(H_j, G)| - 2 beta_j e_j p^(e_j - 1) E(G)]
    """
    p = report.require_subcritical()
    edges = graph.edge_count
    total = 0.0
    for c, h, beta, e in zip(
        spec.scales(graph.n), hom_vector(spec, graph), spec.betas, spec.edge_counts
    ):
        total += c * h - 2.0 * beta * e * p ** (e - 1) * edges
    return total


def tilt_difference(
    spec: ErgmSpec, report: RegionReport, graph: EdgeGraph, s: EdgeId
) -> float:
    """c_s(y) = g(y with s) - g(y without s).

    The edge term cancels exactly, so only j >= 2 contributes.
    """
    p = report.require_subcritical()
    total = 0.0
    for c, t, beta, e in zip(
        spec.scales(graph.n), spec.templates, spec.betas, spec.edge_counts
    ):
        if is_single_edge(t):
            continue
        total += c * rooted_hom_count(t, graph, s) - 2.0 * beta * e * p ** (e - 1)
    return total
