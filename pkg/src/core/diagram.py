"""
Stationary Bratteli diagrams: construction, validation, telescoping and path spaces.
"""

import logging
import math
from collections import deque
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .. import config
from ..helpers.errors import (
    ConfigError,
    DegenerateDiagramError,
    EnumerationCapError,
    InvalidPathError,
    InvalidSubstitutionError,
    MismatchedDiagramError,
    PreconditionError,
)
from .base import ROOT, Edge, FinitePath, PathSpec, PerronData, StationaryDiagram, Substitution, Vertex

logger = logging.getLogger(__name__)


class PrefixResult(NamedTuple):
    """|x^y| and the common prefix; exact=False means "at least length" """

    length: int
    prefix: FinitePath
    exact: bool
    equal: bool = False


class CantorVerdict(NamedTuple):
    hypothesis_ok: bool
    perfect: bool


def _build(labels: Sequence[str], edges: List[Edge], name: str = "") -> StationaryDiagram:
    q = len(labels)
    adjacency = [[0] * q for _ in range(q)]
    for edge in edges:
        adjacency[edge.source][edge.range] += 1
    vertices = tuple(Vertex(i, label) for i, label in enumerate(labels))
    root_edges = tuple(Edge(v, ROOT, v, labels[v]) for v in range(q))
    return StationaryDiagram(vertices, tuple(edges), root_edges, tuple(tuple(row) for row in adjacency), name)


def from_substitution(sub: Substitution, name: str = "") -> StationaryDiagram:
    """Diagram of a substitution: one edge i -> j per occurrence of j in the rule of i"""
    if not sub.alphabet:
        raise InvalidSubstitutionError("empty alphabet")
    if len(set(sub.alphabet)) != len(sub.alphabet):
        raise InvalidSubstitutionError("alphabet letters must be unique")
    index = {letter: i for i, letter in enumerate(sub.alphabet)}
    rules = dict(sub.rules)
    for key in rules:
        if key not in index:
            raise InvalidSubstitutionError(f"rule given for unknown letter '{key}'")

    edges: List[Edge] = []
    for letter in sub.alphabet:
        word = rules.get(letter, "")
        if not word:
            raise InvalidSubstitutionError(f"letter '{letter}' has an empty or missing rule")
        for position, target in enumerate(word):
            if target not in index:
                raise InvalidSubstitutionError(
                    f"rule {letter} -> {word} references unknown letter '{target}'"
                )
            edges.append(Edge(len(edges), index[letter], index[target], f"{letter}{position}"))
    return _build(sub.alphabet, edges, name)


def diagram_from_adjacency(labels: Sequence[str], adjacency: Sequence[Sequence[int]],
                           name: str = "") -> StationaryDiagram:
    """Diagram with A[v][w] parallel edges v -> w, created in row-major order"""
    q = len(labels)
    if q == 0:
        raise ConfigError("diagram.vertices: at least one vertex required")
    if len(adjacency) != q or any(len(row) != q for row in adjacency):
        raise ConfigError(f"diagram.adjacency: expected a {q}x{q} matrix")
    edges: List[Edge] = []
    for v, row in enumerate(adjacency):
        for w, count in enumerate(row):
            if not isinstance(count, int) or count < 0:
                raise ConfigError(f"diagram.adjacency[{v}][{w}]: expected a non-negative integer")
            for t in range(count):
                suffix = f"#{t}" if count > 1 else ""
                edges.append(Edge(len(edges), v, w, f"{labels[v]}>{labels[w]}{suffix}"))
    return _build(labels, edges, name)


def substitution_from_json(obj: Any) -> Substitution:
    if not isinstance(obj, dict):
        raise ConfigError("substitution: expected an object with 'alphabet' and 'rules'")
    alphabet = obj.get("alphabet")
    rules = obj.get("rules")
    if not isinstance(alphabet, list) or not all(isinstance(a, str) and a for a in alphabet):
        raise ConfigError("substitution.alphabet: expected a list of letters")
    if not isinstance(rules, dict) or not all(isinstance(w, str) for w in rules.values()):
        raise ConfigError("substitution.rules: expected a mapping letter -> word")
    return Substitution.from_mapping(alphabet, rules)


def diagram_from_json(obj: Any, name: str = "") -> StationaryDiagram:
    """Explicit diagram: {vertices, adjacency} or {vertices, edges: [{source, range, name?}]}"""
    if not isinstance(obj, dict):
        raise ConfigError("diagram: expected an object")
    labels = obj.get("vertices")
    if not isinstance(labels, list) or not labels or not all(isinstance(v, str) for v in labels):
        raise ConfigError("diagram.vertices: expected a non-empty list of labels")
    if len(set(labels)) != len(labels):
        raise ConfigError("diagram.vertices: labels must be unique")
    if "edges" in obj:
        index = {label: i for i, label in enumerate(labels)}
        edges: List[Edge] = []
        for i, raw in enumerate(obj["edges"]):
            if not isinstance(raw, dict) or raw.get("source") not in index or raw.get("range") not in index:
                raise ConfigError(f"diagram.edges[{i}]: source and range must be vertex labels")
            src, dst = index[raw["source"]], index[raw["range"]]
            edges.append(Edge(i, src, dst, str(raw.get("name") or f"e{i}")))
        if len({e.name for e in edges}) != len(edges):
            raise ConfigError("diagram.edges: edge names must be unique")
        return _build(labels, edges, name)
    if "adjacency" in obj:
        return diagram_from_adjacency(labels, obj["adjacency"], name)
    raise ConfigError("diagram: expected 'edges' or 'adjacency'")


def diagram_to_json(d: StationaryDiagram) -> Dict[str, Any]:
    return {
        "name": d.name,
        "vertices": [v.label for v in d.vertices],
        "edges": [
            {"id": e.id, "name": e.name, "source": d.label(e.source), "range": d.label(e.range)}
            for e in d.edges
        ],
        "root_edges": [{"id": e.id, "range": d.label(e.range)} for e in d.root_edges],
        "adjacency": [list(row) for row in d.adjacency],
    }


def _bool_power_rows(d: StationaryDiagram, max_power: int):
    """Yield (n, boolean pattern of A^n) for n = 1..max_power"""
    base = (d.matrix > 0).astype(np.int64)
    current = base.copy()
    for n in range(1, max_power + 1):
        yield n, current > 0
        current = ((current @ base) > 0).astype(np.int64)


def is_primitive(d: StationaryDiagram) -> Tuple[bool, Optional[int]]:
    """(True, least n with A^n > 0) within the Wielandt bound, else (False, None)"""
    bound = (d.q - 1) ** 2 + 1
    for n, pattern in _bool_power_rows(d, bound):
        if pattern.all():
            return True, n
    return False, None


def spectral_radius(d: StationaryDiagram) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(d.matrix.astype(float)))))


def check_cantor(d: StationaryDiagram, max_depth: int) -> CantorVerdict:
    """Hypothesis (every vertex reaches every vertex at some common depth) and branching"""
    reached = [False] * d.q
    for _, pattern in _bool_power_rows(d, max(max_depth, 0)):
        for v in range(d.q):
            if not reached[v] and pattern[v].all():
                reached[v] = True
        if all(reached):
            break
    perfect = spectral_radius(d) > 1.0 + 1e-9
    return CantorVerdict(all(reached), perfect)


def _edge_word(edge: Edge) -> Tuple[int, ...]:
    return edge.word or (edge.id,)


def adjacency_power(d: StationaryDiagram, k: int) -> List[List[int]]:
    """A^k in exact integers"""
    result = [[int(v == w) for w in range(d.q)] for v in range(d.q)]
    for _ in range(k):
        result = [
            [sum(result[v][u] * d.adjacency[u][w] for u in range(d.q)) for w in range(d.q)]
            for v in range(d.q)
        ]
    return result


def edge_count(d: StationaryDiagram, k: int) -> int:
    """p^(k): number of composable k-edge sequences, the sum of the entries of A^k"""
    return sum(map(sum, adjacency_power(d, k)))


def telescope(d: StationaryDiagram, k: int) -> StationaryDiagram:
    """k-th telescoping: same vertices, one edge per composable k-edge sequence"""
    if k < 1:
        raise PreconditionError(f"telescoping exponent must be >= 1, got {k}")
    count = edge_count(d, k)
    if count > config.enum_cap():
        raise EnumerationCapError(
            f"telescope(k={k}) would create {count} edges, above the enumeration cap {config.enum_cap()}"
        )

    edges: List[Edge] = []
    for v in range(d.q):
        stack: List[Tuple[int, Tuple[int, ...]]] = [(v, ())]
        # depth-first in edge-id order
        while stack:
            vertex, seq = stack.pop()
            if len(seq) == k:
                word = tuple(i for e in seq for i in _edge_word(d.edges[e]))
                name = "+".join(d.edges[e].name for e in seq)
                edges.append(Edge(len(edges), v, vertex, name, word))
                continue
            for e in reversed(d.out_edges(vertex)):
                stack.append((d.edges[e].range, seq + (e,)))
    name = f"{d.name}^{k}" if d.name else ""
    logger.debug(f"Telescoped {d.name or 'diagram'} with k={k}: {len(edges)} edges")
    return _build([v.label for v in d.vertices], edges, name)


def validate_path(d: StationaryDiagram, path: FinitePath):
    if path.root is None:
        if path.body:
            raise InvalidPathError("body edges without a root edge")
        return
    if not 0 <= path.root < d.q:
        raise InvalidPathError(f"unknown root edge {path.root}")
    current = path.root
    for position, e in enumerate(path.body, start=1):
        if not 0 <= e < d.p:
            raise InvalidPathError(f"unknown edge {e} at position {position}")
        if d.edges[e].source != current:
            raise InvalidPathError(
                f"edge {d.edges[e].name} at position {position} does not start at {d.label(current)}"
            )
        current = d.edges[e].range


def path_counts(d: StationaryDiagram, n: int) -> List[int]:
    """Number of paths of depth n ending at each vertex (exact integers, n >= 1)"""
    counts = [1] * d.q
    for _ in range(n - 1):
        counts = [sum(counts[v] * d.adjacency[v][w] for v in range(d.q)) for w in range(d.q)]
    return counts


def count_paths(d: StationaryDiagram, n: int) -> int:
    """#Pi_n"""
    return 1 if n == 0 else sum(path_counts(d, n))


def enumerate_paths(d: StationaryDiagram, n: int, cap: Optional[int] = None) -> List[FinitePath]:
    """Pi_n in lexicographic edge-id order"""
    if n < 0:
        raise PreconditionError(f"depth must be >= 0, got {n}")
    cap = cap or config.enum_cap()
    total = count_paths(d, n)
    if total > cap:
        raise EnumerationCapError(f"#Pi_{n} = {total} exceeds the enumeration cap {cap}")
    level = [FinitePath()]
    for _ in range(n):
        level = [path.extend(edge) for path in level for edge in extensions(d, path, validate=False)]
    return level


def extensions(d: StationaryDiagram, path: FinitePath, validate: bool = True) -> List[Edge]:
    """ext(gamma): root edges for the empty path, else the edges leaving r(gamma)"""
    if validate:
        validate_path(d, path)
    if path.root is None:
        return list(d.root_edges)
    return [d.edges[e] for e in d.out_edges(d.range_of(path))]


def path_word(d: StationaryDiagram, path: FinitePath) -> str:
    if path.root is None:
        return ""
    return ".".join([d.label(path.root)] + [d.edges[e].name for e in path.body])


def spec_word(spec: PathSpec) -> str:
    word = path_word(spec.diagram, spec.prefix)
    if spec.tail is None:
        return word + "..."
    return word + "(" + ".".join(spec.diagram.edges[e].name for e in spec.tail) + ")"


def make_spec(d: StationaryDiagram, prefix: FinitePath, tail: Optional[Sequence[int]] = None) -> PathSpec:
    validate_path(d, prefix)
    if tail is not None:
        tail = tuple(tail)
        if not tail:
            raise InvalidPathError("periodic tail must be non-empty")
        if prefix.root is None:
            raise InvalidPathError("a periodic tail needs a prefix with a root edge")
        start = d.range_of(prefix)
        validate_path(d, FinitePath(start, tail))
        if d.edges[tail[-1]].range != start:
            raise InvalidPathError("periodic tail does not close into a cycle")
    return PathSpec(d, prefix, tail)


def canonical_spec(spec: PathSpec) -> PathSpec:
    """Minimal period, tail rotated as far back into the prefix as possible"""
    if spec.tail is None:
        return spec
    tail = spec.tail
    length = len(tail)
    for period in range(1, length + 1):
        if length % period == 0 and tail == tail[:period] * (length // period):
            tail = tail[:period]
            break
    body = list(spec.prefix.body)
    while body and body[-1] == tail[-1]:
        body.pop()
        tail = (tail[-1],) + tail[:-1]
    return PathSpec(spec.diagram, FinitePath(spec.prefix.root, tuple(body)), tail)


def _same_diagram(x: PathSpec, y: PathSpec):
    if x.diagram is not y.diagram and x.diagram != y.diagram:
        raise MismatchedDiagramError("paths belong to different diagrams")


def common_prefix(x: PathSpec, y: PathSpec, max_depth: Optional[int] = None) -> PrefixResult:
    """|x^y|, exact when the first difference occurs before max_depth"""
    _same_diagram(x, y)
    max_depth = config.DISTANCE_MAX_DEPTH if max_depth is None else max_depth
    for position in range(max_depth):
        a, b = x.edge_at(position), y.edge_at(position)
        if a is None or b is None:
            # agreement up to the depth a truncated spec pins down
            return PrefixResult(position, x.head(position), False)
        if a != b:
            return PrefixResult(position, x.head(position), True)
    equal = x.is_periodic and y.is_periodic and canonical_spec(x) == canonical_spec(y)
    return PrefixResult(max_depth, x.head(max_depth), False, equal)


def _choose(rng: np.random.Generator, options: Sequence[int], weights: Optional[Sequence[float]] = None) -> int:
    if weights is None:
        return options[int(rng.integers(len(options)))]
    probs = np.asarray(weights, dtype=float)
    return options[int(rng.choice(len(options), p=probs / probs.sum()))]


def _walk(d: StationaryDiagram, start: FinitePath, depth: int, rng: np.random.Generator,
          perron: Optional[PerronData] = None) -> FinitePath:
    path = start
    while path.depth < depth:
        if path.root is None:
            options = list(range(d.q))
            weights = list(perron.nu) if perron else None
            path = FinitePath(_choose(rng, options, weights), ())
            continue
        vertex = d.range_of(path)
        options = list(d.out_edges(vertex))
        if not options:
            raise DegenerateDiagramError(f"dead end: vertex {d.label(vertex)} has no outgoing edge")
        weights = None
        if perron:
            weights = [perron.nu[d.edges[e].range] / (perron.lam * perron.nu[vertex]) for e in options]
        path = FinitePath(path.root, path.body + (_choose(rng, options, weights),))
    return path


def sample_path(d: StationaryDiagram, depth: int, seed: int, weighted: bool = False,
                perron: Optional[PerronData] = None) -> FinitePath:
    """Random path of the given depth; uniform over ext(.) at each step unless weighted"""
    if depth < 0:
        raise PreconditionError(f"depth must be >= 0, got {depth}")
    if weighted and perron is None:
        raise PreconditionError("measure-weighted sampling needs Perron data")
    rng = np.random.default_rng(seed)
    return _walk(d, FinitePath(), depth, rng, perron if weighted else None)


def random_path(d: StationaryDiagram, depth: int, rng: np.random.Generator,
                perron: Optional[PerronData] = None) -> FinitePath:
    """Like sample_path, drawing from an existing generator"""
    return _walk(d, FinitePath(), depth, rng, perron)


def sample_pair(d: StationaryDiagram, depth: int, rng: np.random.Generator,
                base: Optional[FinitePath] = None, attempts: int = 256) -> Tuple[FinitePath, FinitePath]:
    """Two depth-`depth` paths agreeing exactly up to a random split position.

    With `base` the first path is given and only the second one is drawn.
    """
    if depth < 1:
        raise PreconditionError("pairs need depth >= 1")
    x = base if base is not None else _walk(d, FinitePath(), depth, rng)
    if x.depth != depth:
        raise InvalidPathError(f"base path has depth {x.depth}, expected {depth}")
    for _ in range(attempts):
        split = int(rng.integers(depth))
        if split == 0:
            choices = [v for v in range(d.q) if v != x.root]
            if choices:
                first = FinitePath(_choose(rng, choices), ())
                return x, _walk(d, first, depth, rng)
            continue
        head = x.truncate(split)
        current = x.edge_at(split)
        choices = [e for e in d.out_edges(d.range_of(head)) if e != current]
        if choices:
            first = FinitePath(head.root, head.body + (_choose(rng, choices),))
            return x, _walk(d, first, depth, rng)
    raise DegenerateDiagramError(f"no branching found along a sampled path of depth {depth}")


def complete_periodic(d: StationaryDiagram, path: FinitePath) -> PathSpec:
    """Periodic spec extending a finite path by the shortest cycle back to r(path)"""
    if path.root is None:
        raise InvalidPathError("cannot complete the empty root path")
    start = d.range_of(path)
    parent: Dict[int, int] = {}
    frontier: deque = deque([start])
    while frontier:
        u = frontier.popleft()
        for e in d.out_edges(u):
            w = d.edges[e].range
            if w == start:
                cycle = [e]
                node = u
                while node != start:
                    back = parent[node]
                    cycle.append(back)
                    node = d.edges[back].source
                return PathSpec(d, path, tuple(reversed(cycle)))
            if w not in parent:
                parent[w] = e
                frontier.append(w)
    raise DegenerateDiagramError(f"no cycle returns to vertex {d.label(start)}")


def to_telescoped(d: StationaryDiagram, dk: StationaryDiagram, k: int, spec: PathSpec) -> PathSpec:
    """Regroup the body of a periodic spec of d into k-blocks: a spec of telescope(d, k)"""
    if spec.tail is None:
        raise InvalidPathError("only periodic specs can be regrouped exactly")
    if k == 1 and dk is d:
        return spec
    index = {edge.word: edge.id for edge in dk.edges}
    body_len = spec.prefix.depth - 1
    blocks = math.ceil(body_len / k)
    period = len(spec.tail) * k // math.gcd(len(spec.tail), k)

    def block(start: int) -> int:
        word = tuple(i for j in range(start, start + k) for i in _edge_word(d.edges[spec.edge_at(j)]))
        return index[word]

    prefix_body = tuple(block(1 + k * b) for b in range(blocks))
    tail_start = 1 + k * blocks
    tail = tuple(block(tail_start + k * b) for b in range(period // k))
    return PathSpec(dk, FinitePath(spec.prefix.root, prefix_body), tail)
