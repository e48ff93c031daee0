"""
Deterministic counting identities, used as a self-test of the counting code.
"""

import itertools
import logging
import math
from typing import List

import numpy as np

from .counting import hom_count, rooted_hom_count, rooted_pair_hom_count
from .edge_graph import EdgeGraph, EdgeId
from .template import Template, add_isolated_vertex, delete_edge

logger = logging.getLogger(__name__)


def random_template(rng: np.random.Generator, max_v: int = 4) -> Template:
    """Random template on 2..max_v vertices with at least one edge.

    Isolated vertices may occur.
    """
    v = int(rng.integers(2, max_v + 1))
    pairs = list(itertools.combinations(range(1, v + 1), 2))
    keep = rng.random(len(pairs)) < 0.5
    if not keep.any():
        keep[int(rng.integers(len(pairs)))] = True
    return Template.of(v, [pair for pair, flag in zip(pairs, keep) if flag])


def random_graph(rng: np.random.Generator, n: int, density: float = 0.5) -> EdgeGraph:
    size = n * (n - 1) // 2
    return EdgeGraph.from_array(n, (rng.random(size) < density).astype(np.uint8))


def check_identities(
    graph: EdgeGraph,
    template: Template,
    rng: np.random.Generator,
    toggle_checks: int = 3,
) -> List[str]:
    """
    Check the counting identities on one (graph, template) pair.

    Args:
        graph: Host graph
        template: Pattern with at least one edge and v <= graph.n
        rng: Generator used to pick edges for the toggle checks
        toggle_checks: Number of random edges checked by full recount

    Returns:
        Human-readable descriptions of every violated identity
    """
    violations: List[str] = []
    n = graph.n
    label = f"H(v={template.v}, edges={list(template.edges)}) on n={n}"
    hom = hom_count(template, graph)
    all_edges = [EdgeId.from_index(n, k) for k in range(graph.size)]
    rooted = [rooted_hom_count(template, graph, s) for s in all_edges]

    # toggle
    for k in rng.choice(graph.size, size=min(toggle_checks, graph.size), replace=False):
        s = all_edges[int(k)]
        diff = hom_count(template, graph.with_edge(s)) - hom_count(template, graph.without_edge(s))
        if diff != rooted[s.index]:
            violations.append(f"toggle at {s.endpoints}: {diff} != {rooted[s.index]} for {label}")

    # edge-weighted sum
    weighted = sum(count for s, count in zip(all_edges, rooted) if graph.has_edge(s))
    if weighted != template.e * hom:
        violations.append(f"edge-weighted: {weighted} != {template.e}*{hom} for {label}")

    # deletion sum; each unordered edge stands for both orientations, halved
    deleted = sum(hom_count(delete_edge(template, k), graph) for k in range(template.e))
    if sum(rooted) != deleted:
        violations.append(f"deletion-sum: {sum(rooted)} != {deleted} for {label}")

    if template.v < n:
        padded = hom_count(add_isolated_vertex(template), graph)
        if padded != (n - template.v) * hom:
            violations.append(
                f"isolated-vertex: {padded} != {n - template.v}*{hom} for {label}"
            )

    complete = hom_count(template, EdgeGraph.complete(template.v))
    if complete != math.factorial(template.v):
        violations.append(f"complete host: {complete} != {template.v}! for {label}")

    if graph.size >= 2:
        l_idx, r_idx = rng.choice(graph.size, size=2, replace=False)
        l, r = all_edges[int(l_idx)], all_edges[int(r_idx)]
        both = graph.with_edge(l).with_edge(r)
        mixed = (
            hom_count(template, both)
            - hom_count(template, both.without_edge(r))
            - hom_count(template, both.without_edge(l))
            + hom_count(template, both.without_edge(l).without_edge(r))
        )
        pair = rooted_pair_hom_count(template, graph, l, r)
        if mixed != pair:
            violations.append(
                f"pair-rooted at {l.endpoints},{r.endpoints}: {pair} != {mixed} for {label}"
            )

    for message in violations:
        logger.warning(message)
    return violations


def run_identity_suite(n: int, trials: int, rng: np.random.Generator, max_v: int = 4) -> List[str]:
    """Check every identity on ``trials`` random (graph, template) pairs."""
    violations: List[str] = []
    for _ in range(trials):
        graph = random_graph(rng, n, density=float(rng.uniform(0.2, 0.8)))
        template = random_template(rng, max_v=min(max_v, n))
        violations.extend(check_identities(graph, template, rng))
    logger.info(f"Identity suite: {trials} trials on n={n}, {len(violations)} violations")
    return violations
