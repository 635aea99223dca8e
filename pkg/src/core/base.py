"""
Value types shared by the core modules.

All values are immutable after construction and safe to share between
readers. Root edges live in their own id space: the root edge ending at
vertex v has id v and source ROOT.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, Optional, Tuple

import numpy as np

ROOT = -1


@dataclass(frozen=True)
class Vertex:
    id: int
    label: str


@dataclass(frozen=True)
class Edge:
    id: int
    source: int
    range: int
    name: str = ""
    # constituent edges of the original diagram (telescoped edges only)
    word: Tuple[int, ...] = ()

    @property
    def is_root(self) -> bool:
        return self.source == ROOT


@dataclass(frozen=True)
class Substitution:
    alphabet: Tuple[str, ...]
    rules: Tuple[Tuple[str, str], ...]

    @classmethod
    def from_mapping(cls, alphabet, rules: Dict[str, str]) -> "Substitution":
        alphabet = tuple(alphabet)
        keys = list(alphabet) + [key for key in rules if key not in alphabet]
        return cls(alphabet, tuple((key, rules.get(key, "")) for key in keys))

    def rule(self, letter: str) -> str:
        return dict(self.rules)[letter]


@dataclass(frozen=True)
class StationaryDiagram:
    """Stationary Bratteli diagram: one level of vertices/edges repeated forever"""

    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]
    root_edges: Tuple[Edge, ...]
    adjacency: Tuple[Tuple[int, ...], ...]
    name: str = field(default="", compare=False)
    _out: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        out = [[] for _ in self.vertices]
        for edge in self.edges:
            out[edge.source].append(edge.id)
        object.__setattr__(self, "_out", tuple(tuple(ids) for ids in out))

    @property
    def q(self) -> int:
        return len(self.vertices)

    @property
    def p(self) -> int:
        return len(self.edges)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.adjacency, dtype=np.int64).reshape(self.q, self.q)

    def out_edges(self, vertex: int) -> Tuple[int, ...]:
        """Ids of the edges with the given source vertex, in id order"""
        return self._out[vertex]

    def label(self, vertex: int) -> str:
        return self.vertices[vertex].label

    def vertex_id(self, label: str) -> int:
        for v in self.vertices:
            if v.label == label:
                return v.id
        raise KeyError(label)

    def range_of(self, path: "FinitePath") -> Optional[int]:
        """r(gamma); None for the empty root path"""
        if path.root is None:
            return None
        if path.body:
            return self.edges[path.body[-1]].range
        return path.root


@dataclass(frozen=True)
class FinitePath:
    """gamma = (e_0; e_1 ... e_n): root edge given by its range vertex, then body edge ids"""

    root: Optional[int] = None
    body: Tuple[int, ...] = ()

    @property
    def depth(self) -> int:
        return 0 if self.root is None else 1 + len(self.body)

    def edge_at(self, position: int) -> int:
        """Edge at a position: vertex id of the root edge at 0, body edge id after"""
        if position == 0:
            return self.root
        return self.body[position - 1]

    def extend(self, edge: Edge) -> "FinitePath":
        if edge.is_root:
            return FinitePath(edge.range, ())
        return FinitePath(self.root, self.body + (edge.id,))

    def truncate(self, depth: int) -> "FinitePath":
        """gamma_[0,depth]"""
        if depth <= 0:
            return FinitePath()
        return FinitePath(self.root, self.body[: depth - 1])


@dataclass(frozen=True)
class PathSpec:
    """Finite denotation of an infinite path: prefix then a repeated cycle of body edges.

    A spec without tail is truncated: it only pins the path down to the prefix depth.
    """

    diagram: StationaryDiagram = field(compare=False, repr=False)
    prefix: FinitePath
    tail: Optional[Tuple[int, ...]] = None

    @property
    def is_periodic(self) -> bool:
        return self.tail is not None

    @property
    def known_depth(self) -> float:
        return math.inf if self.tail is not None else self.prefix.depth

    def edge_at(self, position: int) -> Optional[int]:
        """Edge at a position, or None beyond the depth of a truncated spec"""
        depth = self.prefix.depth
        if position < depth:
            return self.prefix.edge_at(position)
        if self.tail is None:
            return None
        return self.tail[(position - depth) % len(self.tail)]

    def edges(self) -> Iterator[int]:
        position = 0
        while True:
            edge = self.edge_at(position)
            if edge is None:
                return
            yield edge
            position += 1

    def head(self, depth: int) -> FinitePath:
        """The finite path x_[0,depth] (depth limited to the known depth)"""
        depth = int(min(depth, self.known_depth))
        if depth <= 0:
            return FinitePath()
        return FinitePath(self.edge_at(0), tuple(self.edge_at(j) for j in range(1, depth)))


@dataclass(frozen=True)
class PerronData:
    lam: float
    nu: Tuple[float, ...]
    residual: float
    iterations: int = 0


@dataclass(frozen=True)
class Measure:
    perron: PerronData
    diagram: StationaryDiagram = field(repr=False)


@dataclass(frozen=True)
class SelfSimilarMetric:
    """rho(x, y) = a_{r(x^y)} alpha^{|x^y|}, with the whole space at diameter 1"""

    diagram: StationaryDiagram = field(repr=False)
    alpha: float
    scale: Tuple[float, ...]
    mode: str = "regular"
    tile_dim: Optional[int] = None

    @property
    def a_min(self) -> float:
        return min(self.scale)

    @property
    def a_max(self) -> float:
        return max(self.scale)


@dataclass(frozen=True)
class EdgeLabeling:
    """beta on body edges (by edge id) and on root edges (by vertex id)"""

    body: Tuple[float, ...]
    root: Tuple[float, ...]

    def pairs(self) -> Iterator[Tuple[float, float]]:
        for labels in (self.body, self.root):
            for i in range(len(labels)):
                for j in range(i + 1, len(labels)):
                    yield labels[i], labels[j]

    @property
    def delta_min(self) -> float:
        return min((abs(a - b) for a, b in self.pairs()), default=math.nan)

    @property
    def delta_max(self) -> float:
        return max((abs(a - b) for a, b in self.pairs()), default=math.nan)

    def at(self, position: int, edge: int) -> float:
        return self.root[edge] if position == 0 else self.body[edge]


@dataclass(frozen=True)
class EmbeddingPlan:
    k: int
    n: int
    basic_n: int
    p_k: int
    # n > d_H log p^(k) / log Lambda^k, recorded as (lhs, rhs)
    inequality: Tuple[float, float] = (0.0, 0.0)


# beta(e, s): edge id and exponent to a positive real
BetaFunction = Callable[[int, float], float]


@dataclass(frozen=True)
class SpectrumParams:
    s: float
    s0: float
    alpha: float
    lambda_s: float
    beta: BetaFunction = field(repr=False)
    seeds: Tuple[float, ...] = ()

    def seed(self, vertex: int) -> float:
        return self.seeds[vertex] if self.seeds else 0.0


@dataclass(frozen=True)
class EigenRecord:
    path: FinitePath
    value: float
    multiplicity: int
