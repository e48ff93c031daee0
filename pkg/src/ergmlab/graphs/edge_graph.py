"""
Bit-packed simple graphs on labeled vertices.

Vertices are 1..n. The edge (i, j), i < j, has the lexicographic index
(i-1)(2n-i)/2 + (j-i-1); bit k of ``EdgeGraph.bits`` is the indicator of the
edge with index k.
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from ..errors import DomainError


def edge_total(n: int) -> int:
    """Number of vertex pairs N = n(n-1)/2."""
    return n * (n - 1) // 2


def pair_index(n: int, i: int, j: int) -> int:
    """Canonical index of the pair {i, j} (1-based vertices)."""
    if i > j:
        i, j = j, i
    if not (1 <= i < j <= n):
        raise DomainError(f"Invalid edge ({i}, {j}) for n={n}")
    return (i - 1) * (2 * n - i) // 2 + (j - i - 1)


@lru_cache(maxsize=64)
def edge_pairs(n: int) -> Tuple[Tuple[int, int], ...]:
    """All pairs (i, j), 1-based, in canonical order."""
    return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))


@lru_cache(maxsize=64)
def _pair_lookup(n: int) -> Dict[Tuple[int, int], int]:
    return {pair: k for k, pair in enumerate(edge_pairs(n))}


@dataclass(frozen=True)
class EdgeId:
    """An edge s = (i, j), i < j, together with its canonical index"""
    i: int
    j: int
    index: int

    @classmethod
    def of(cls, n: int, i: int, j: int) -> "EdgeId":
        if i > j:
            i, j = j, i
        return cls(i, j, pair_index(n, i, j))

    @classmethod
    def from_index(cls, n: int, index: int) -> "EdgeId":
        pairs = edge_pairs(n)
        if not 0 <= index < len(pairs):
            raise DomainError(f"Edge index {index} out of range for n={n}")
        i, j = pairs[index]
        return cls(i, j, index)

    @property
    def endpoints(self) -> Tuple[int, int]:
        return (self.i, self.j)


@dataclass(frozen=True)
class EdgeGraph:
    """Simple graph on vertices 1..n stored as an edge-indicator bit vector"""
    n: int
    bits: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"Vertex count must be positive, got {self.n}")
        if self.bits < 0 or self.bits >> edge_total(self.n):
            raise DomainError(f"Bit vector does not fit {edge_total(self.n)} edges")

    # --- constructors -----------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "EdgeGraph":
        return cls(n, 0)

    @classmethod
    def complete(cls, n: int) -> "EdgeGraph":
        return cls(n, (1 << edge_total(n)) - 1)

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[Sequence[int]]) -> "EdgeGraph":
        bits = 0
        for i, j in pairs:
            bits |= 1 << pair_index(n, i, j)
        return cls(n, bits)

    @classmethod
    def from_array(cls, n: int, indicators: np.ndarray) -> "EdgeGraph":
        """Build from a 0/1 vector of length N in canonical order."""
        arr = np.asarray(indicators, dtype=np.uint8)
        if arr.shape != (edge_total(n),):
            raise DomainError(f"Expected {edge_total(n)} indicators, got shape {arr.shape}")
        packed = np.packbits(arr, bitorder="little").tobytes()
        return cls(n, int.from_bytes(packed, "little"))

    @classmethod
    def from_adjacency(cls, n: int, bits: int, adjacency: Sequence[int]) -> "EdgeGraph":
        """Build from a bit vector whose vertex bitsets are already known."""
        graph = cls(n, bits)
        graph.__dict__["adjacency"] = tuple(adjacency)
        return graph

    # --- queries ----------------------------------------------------------

    @property
    def size(self) -> int:
        """N, the number of vertex pairs"""
        return edge_total(self.n)

    @property
    def edge_count(self) -> int:
        return self.bits.bit_count()

    def has_edge(self, s: EdgeId) -> bool:
        return bool(self.bits >> s.index & 1)

    def edges(self) -> List[EdgeId]:
        pairs = edge_pairs(self.n)
        out = []
        bits = self.bits
        while bits:
            low = bits & -bits
            k = low.bit_length() - 1
            out.append(EdgeId(pairs[k][0], pairs[k][1], k))
            bits ^= low
        return out

    @cached_property
    def adjacency(self) -> Tuple[int, ...]:
        """Neighborhood bitsets; bit w-1 of entry v-1 is set when v ~ w."""
        adj = [0] * self.n
        for s in self.edges():
            adj[s.i - 1] |= 1 << (s.j - 1)
            adj[s.j - 1] |= 1 << (s.i - 1)
        return tuple(adj)

    def degree(self, v: int) -> int:
        return self.adjacency[v - 1].bit_count()

    def to_array(self) -> np.ndarray:
        size = self.size
        raw = self.bits.to_bytes((size + 7) // 8 or 1, "little")
        return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size]

    # --- updates ----------------------------------------------------------

    def with_edge(self, s: EdgeId) -> "EdgeGraph":
        return EdgeGraph(self.n, self.bits | (1 << s.index))

    def without_edge(self, s: EdgeId) -> "EdgeGraph":
        return EdgeGraph(self.n, self.bits & ~(1 << s.index))

    def is_subgraph_of(self, other: "EdgeGraph") -> bool:
        return self.n == other.n and self.bits & ~other.bits == 0

    # --- serialization ----------------------------------------------------

    def to_hex(self) -> str:
        return format(self.bits, "x")

    @classmethod
    def from_hex(cls, n: int, text: str) -> "EdgeGraph":
        return cls(n, int(text, 16))

    def format(self) -> str:
        """Text form: ``n <count>`` followed by the hex bit vector."""
        return f"n {self.n}\n{self.to_hex()}\n"

    @classmethod
    def parse(cls, text: str) -> "EdgeGraph":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if len(lines) != 2 or not lines[0].startswith("n "):
            raise DomainError("Graph text must be 'n <count>' followed by a hex line")
        try:
            return cls.from_hex(int(lines[0].split()[1]), lines[1])
        except ValueError as e:
            raise DomainError(f"Malformed graph text: {e}") from e


class MutableGraph:
    """Edge set with incrementally maintained neighborhood bitsets.

    Used by Markov chains; never shared between threads.
    """

    __slots__ = ("n", "bits", "adj")

    def __init__(self, graph: EdgeGraph):
        self.n = graph.n
        self.bits = graph.bits
        self.adj = list(graph.adjacency)

    def set_edge(self, index: int, i: int, j: int, present: bool) -> None:
        if present:
            self.bits |= 1 << index
            self.adj[i - 1] |= 1 << (j - 1)
            self.adj[j - 1] |= 1 << (i - 1)
        else:
            self.bits &= ~(1 << index)
            self.adj[i - 1] &= ~(1 << (j - 1))
            self.adj[j - 1] &= ~(1 << (i - 1))

    def freeze(self) -> EdgeGraph:
        return EdgeGraph.from_adjacency(self.n, self.bits, self.adj)
