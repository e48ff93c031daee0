"""
Small labeled pattern graphs.

A template has vertices 1..v and an edge list. Templates used inside a model
must not have isolated vertices; the standalone counting operations accept
them, and edge deletion produces them.
"""

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, List, Sequence, Tuple

from ..errors import DomainError


@dataclass(frozen=True)
class Template:
    """Pattern graph H with v vertices and an edge list over 1..v"""
    v: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        normalized = tuple((min(a, b), max(a, b)) for a, b in self.edges)
        object.__setattr__(self, "edges", normalized)
        if self.v < 2:
            raise DomainError(f"Template needs at least 2 vertices, got {self.v}")
        for a, b in normalized:
            if a == b:
                raise DomainError(f"Self-loop at vertex {a}")
            if not (1 <= a and b <= self.v):
                raise DomainError(f"Edge ({a}, {b}) outside vertices 1..{self.v}")
        if len(set(normalized)) != len(normalized):
            raise DomainError("Duplicate edges in template")

    @classmethod
    def of(cls, v: int, edges: Sequence[Sequence[int]]) -> "Template":
        return cls(v, tuple((int(a), int(b)) for a, b in edges))

    @property
    def e(self) -> int:
        return len(self.edges)

    def check_size(self, max_v: int, max_e: int) -> None:
        """Raise DomainError when the template exceeds the given caps."""
        if self.v > max_v or self.e > max_e:
            raise DomainError(
                f"Template too large (v={self.v}, e={self.e}); caps are v<={max_v}, e<={max_e}"
            )

    @cached_property
    def neighbors(self) -> Tuple[frozenset, ...]:
        """0-based neighbor sets"""
        nbrs: List[set] = [set() for _ in range(self.v)]
        for a, b in self.edges:
            nbrs[a - 1].add(b - 1)
            nbrs[b - 1].add(a - 1)
        return tuple(frozenset(s) for s in nbrs)

    @property
    def isolated_vertices(self) -> Tuple[int, ...]:
        return tuple(k + 1 for k, s in enumerate(self.neighbors) if not s)

    @property
    def has_isolated(self) -> bool:
        return bool(self.isolated_vertices)

    def to_dict(self) -> Dict:
        return {"v": self.v, "edges": [list(edge) for edge in self.edges]}

    # --- text format ------------------------------------------------------

    def format(self) -> str:
        """``v <count>`` then one ``i j`` pair per line"""
        lines = [f"v {self.v}"] + [f"{a} {b}" for a, b in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Template":
        lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or not lines[0].startswith("v "):
            raise DomainError("Template text must start with 'v <count>'")
        try:
            v = int(lines[0].split()[1])
            edges = [tuple(int(x) for x in ln.split()) for ln in lines[1:]]
        except ValueError as e:
            raise DomainError(f"Malformed template text: {e}") from e
        if any(len(edge) != 2 for edge in edges):
            raise DomainError("Each edge line must hold exactly two vertices")
        return cls.of(v, edges)

    @classmethod
    def from_name(cls, name: str) -> "Template":
        key = name.strip().lower()
        if key not in NAMED_TEMPLATES:
            raise DomainError(
                f"Unknown template '{name}'. Known: {', '.join(sorted(NAMED_TEMPLATES))}"
            )
        v, edges = NAMED_TEMPLATES[key]
        return cls.of(v, edges)


NAMED_TEMPLATES: Dict[str, Tuple[int, Tuple[Tuple[int, int], ...]]] = {
    "edge": (2, ((1, 2),)),
    "two-star": (3, ((1, 2), (1, 3))),
    "2star": (3, ((1, 2), (1, 3))),
    "triangle": (3, ((1, 2), (1, 3), (2, 3))),
    "tri": (3, ((1, 2), (1, 3), (2, 3))),
    "path3": (4, ((1, 2), (2, 3), (3, 4))),
    "three-star": (4, ((1, 2), (1, 3), (1, 4))),
    "square": (4, ((1, 2), (2, 3), (3, 4), (1, 4))),
}


def is_single_edge(template: Template) -> bool:
    return template.v == 2 and template.e == 1


def delete_edge(template: Template, index: int) -> Template:
    """Remove edge number ``index`` (0-based) keeping every vertex."""
    if not 0 <= index < template.e:
        raise DomainError(f"Edge index {index} invalid for template with {template.e} edges")
    edges = template.edges[:index] + template.edges[index + 1:]
    return Template(template.v, edges)


def add_isolated_vertex(template: Template) -> Template:
    return Template(template.v + 1, template.edges)


@lru_cache(maxsize=256)
def automorphisms(template: Template) -> Tuple[Tuple[int, ...], ...]:
    """All vertex permutations (0-based images) preserving the edge set."""
    edge_set = {frozenset((a - 1, b - 1)) for a, b in template.edges}
    found = []
    for perm in itertools.permutations(range(template.v)):
        if all(frozenset((perm[a], perm[b])) in edge_set for a, b in
               ((x - 1, y - 1) for x, y in template.edges)):
            found.append(perm)
    return tuple(found)


def aut_count(template: Template) -> int:
    """|Aut(H)| by exhaustive permutation check."""
    return len(automorphisms(template))
