"""
Exact injective homomorphism counting.

Maps are injective vertex maps of a template into the host; every template
edge must land on a present host edge. Counting backtracks over template
vertices in most-constrained-first order, intersecting neighborhood bitsets.
The last assigned vertex is counted by popcount and isolated template
vertices contribute a falling-factorial factor.

Edge-rooted counts are computed locally: a designated template edge (p, q) is
pinned onto s = (i, j) and the remaining edges must be present. Injectivity
means no other template edge can also cover s, so summing over ordered
designated edges gives hom(G with s) - hom(G without s) exactly.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Sequence, Tuple

from ..errors import DomainError
from .edge_graph import EdgeGraph, EdgeId
from .template import Template, automorphisms


@dataclass(frozen=True)
class _Plan:
    """Assignment order for one counting problem.

    Slot k holds the image of template vertex ``placed[k]``; slots below
    ``fixed`` are pinned by the caller.
    """
    placed: Tuple[int, ...]
    fixed: int
    back: Tuple[Tuple[int, ...], ...]
    fixed_checks: Tuple[Tuple[int, int], ...]
    isolated: int


def _make_plan(template: Template, pinned: Tuple[int, ...], skip: Optional[Tuple[int, int]]) -> _Plan:
    nbrs = template.neighbors
    skip_set = frozenset(skip) if skip else frozenset()

    def adjacent(a: int, b: int) -> bool:
        return b in nbrs[a] and frozenset((a, b)) != skip_set

    placed = list(pinned)
    remaining = [u for u in range(template.v) if u not in pinned and nbrs[u]]
    isolated = sum(1 for u in range(template.v) if u not in pinned and not nbrs[u])
    while remaining:
        best = max(
            remaining,
            key=lambda u: (sum(adjacent(u, w) for w in placed), len(nbrs[u]), -u),
        )
        placed.append(best)
        remaining.remove(best)

    f = len(pinned)
    back = tuple(
        tuple(m for m in range(k) if adjacent(placed[k], placed[m]))
        for k in range(f, len(placed))
    )
    fixed_checks = tuple(
        (a, b) for a in range(f) for b in range(a + 1, f) if adjacent(placed[a], placed[b])
    )
    return _Plan(tuple(placed), f, back, fixed_checks, isolated)


def _run(plan: _Plan, n: int, adj: Sequence[int], pinned_images: Tuple[int, ...]) -> int:
    m = len(plan.placed)
    tail = math.perm(n - m, plan.isolated)
    if tail == 0:
        return 0
    images = list(pinned_images) + [0] * (m - plan.fixed)
    for a, b in plan.fixed_checks:
        if not adj[images[a]] >> images[b] & 1:
            return 0
    if plan.fixed == m:
        return tail

    full = (1 << n) - 1
    used0 = 0
    for img in pinned_images:
        used0 |= 1 << img
    back = plan.back
    f = plan.fixed
    last = m - 1

    def extend(k: int, used: int) -> int:
        cand = full & ~used
        for slot in back[k - f]:
            cand &= adj[images[slot]]
        if k == last:
            return cand.bit_count()
        total = 0
        while cand:
            low = cand & -cand
            images[k] = low.bit_length() - 1
            total += extend(k + 1, used | low)
            cand ^= low
        return total

    return extend(f, used0) * tail


@lru_cache(maxsize=256)
def _plain_plan(template: Template) -> _Plan:
    return _make_plan(template, (), None)


@lru_cache(maxsize=256)
def _rooted_plans(template: Template) -> Tuple[Tuple[int, _Plan], ...]:
    """One plan per orbit of ordered template edges under Aut(H), with orbit size."""
    auts = automorphisms(template)
    orbits: Dict[Tuple[int, int], int] = {}
    for a, b in template.edges:
        for p, q in ((a - 1, b - 1), (b - 1, a - 1)):
            rep = min((perm[p], perm[q]) for perm in auts)
            orbits[rep] = orbits.get(rep, 0) + 1
    return tuple(
        (size, _make_plan(template, rep, rep)) for rep, size in sorted(orbits.items())
    )


def _check_fits(template: Template, n: int) -> None:
    if template.v > n:
        raise DomainError(f"Template larger than host ({template.v} > {n})")


def hom_count_adjacency(template: Template, n: int, adj: Sequence[int]) -> int:
    """|Hom(H, G)| for a host given by neighborhood bitsets."""
    return _run(_plain_plan(template), n, adj, ())


def rooted_count_adjacency(template: Template, n: int, adj: Sequence[int], i: int, j: int) -> int:
    """Rooted count at the pair of 0-based vertices (i, j)."""
    return sum(size * _run(plan, n, adj, (i, j)) for size, plan in _rooted_plans(template))


def hom_count(template: Template, graph: EdgeGraph) -> int:
    """Number of injective maps V(H) -> V(G) sending every H-edge onto a G-edge."""
    _check_fits(template, graph.n)
    return hom_count_adjacency(template, graph.n, graph.adjacency)


def rooted_hom_count(template: Template, graph: EdgeGraph, s: EdgeId) -> int:
    """Maps covering s with some H-edge, all other H-edges present in G.

    The presence of s itself in G is irrelevant.
    """
    _check_fits(template, graph.n)
    if template.e < 1:
        raise DomainError("Rooted counting needs a template with at least one edge")
    return rooted_count_adjacency(template, graph.n, graph.adjacency, s.i - 1, s.j - 1)


def rooted_pair_hom_count(template: Template, graph: EdgeGraph, l: EdgeId, r: EdgeId) -> int:
    """Maps covering both l and r with distinct H-edges, other H-edges present.

    Computed as the mixed second difference rooted(G with r, l) - rooted(G without r, l).
    """
    if l.index == r.index:
        raise DomainError(f"Edge-pair rooting needs distinct edges, got {l.endpoints} twice")
    _check_fits(template, graph.n)
    if template.e < 1:
        raise DomainError("Rooted counting needs a template with at least one edge")
    adj = list(graph.adjacency)
    ri, rj = r.i - 1, r.j - 1
    adj[ri] |= 1 << rj
    adj[rj] |= 1 << ri
    with_r = rooted_count_adjacency(template, graph.n, adj, l.i - 1, l.j - 1)
    adj[ri] &= ~(1 << rj)
    adj[rj] &= ~(1 << ri)
    without_r = rooted_count_adjacency(template, graph.n, adj, l.i - 1, l.j - 1)
    return with_r - without_r
