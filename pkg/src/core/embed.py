"""
Embeddings of the path space: the bi-Lipschitz map into R^n (max norm) and
the bi-Hoelder map into R, with dimension planning and distortion checks.

Paths are indexed x = (x_0, x_1, ...) with x_0 the root edge. The map into
R^n only reads body positions (>= 1); the map into R also reads x_0, which
is why labelings carry separate root labels.
"""

import logging
import math
from typing import Any, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from .. import config
from ..helpers.errors import (
    InsufficientDepthError,
    InvalidLabelingError,
    MissingLabelError,
    PlanError,
    PreconditionError,
    ThresholdError,
    ZeroDistancePairError,
)
from ..types.schemas import DistortionReport
from .base import (
    EdgeLabeling,
    EmbeddingPlan,
    FinitePath,
    PathSpec,
    PerronData,
    SelfSimilarMetric,
    StationaryDiagram,
)
from .diagram import (
    common_prefix,
    complete_periodic,
    edge_count,
    enumerate_paths,
    random_path,
    sample_pair,
    spec_word,
    telescope,
    to_telescoped,
)
from .dimension import abscissa
from .metric import distance

logger = logging.getLogger(__name__)

# relative slack for floating-point noise when counting bound violations
RATIO_RTOL = 1e-9


def default_labeling(d: StationaryDiagram) -> EdgeLabeling:
    """Uniformly spaced labels: 1..p on body edges, 1..q on root edges"""
    return EdgeLabeling(tuple(float(i + 1) for i in range(d.p)), tuple(float(v + 1) for v in range(d.q)))


def validate_labeling(d: StationaryDiagram, lab: EdgeLabeling) -> EdgeLabeling:
    if len(lab.body) != d.p or len(lab.root) != d.q:
        raise MissingLabelError(
            f"labeling covers {len(lab.body)} edges and {len(lab.root)} root edges, "
            f"diagram has {d.p} and {d.q}"
        )
    for name, labels in (("edge", lab.body), ("root", lab.root)):
        if any(not value > 0 for value in labels):
            raise InvalidLabelingError(f"{name} labels must be positive")
        if len(set(labels)) != len(labels):
            raise InvalidLabelingError(f"{name} labels must be pairwise distinct")
    return lab


def labeling_from_json(d: StationaryDiagram, obj: Mapping[str, Any]) -> EdgeLabeling:
    """{"edges": {name|id: value}, "root": {label: value}}; root labels default to 1..q"""
    if not isinstance(obj, Mapping) or not isinstance(obj.get("edges"), Mapping):
        raise InvalidLabelingError("labels: expected an object with an 'edges' mapping")
    by_key = {str(k): v for k, v in obj["edges"].items()}
    body = []
    for edge in d.edges:
        value = by_key.get(edge.name, by_key.get(str(edge.id)))
        if value is None:
            raise MissingLabelError(f"no label for edge {edge.name} (id {edge.id})")
        body.append(float(value))
    root_raw = obj.get("root")
    if root_raw is None:
        root = [float(v + 1) for v in range(d.q)]
    else:
        try:
            root = [float(root_raw[v.label]) for v in d.vertices]
        except (KeyError, TypeError, ValueError):
            raise MissingLabelError("root labels must cover every vertex label")
    return validate_labeling(d, EdgeLabeling(tuple(body), tuple(root)))


def periodic_series(spec: PathSpec, lab: EdgeLabeling, start: int, step: int, ratio: float) -> float:
    """Exact sum_{j>=0} beta(x_{start+step*j}) ratio^j for a periodic spec"""
    depth = spec.prefix.depth
    total = 0.0
    j = 0
    while start + step * j < depth:
        position = start + step * j
        total += lab.at(position, spec.edge_at(position)) * ratio ** j
        j += 1
    period = len(spec.tail) // math.gcd(step, len(spec.tail))
    cycle = 0.0
    for t in range(period):
        position = start + step * (j + t)
        cycle += lab.at(position, spec.edge_at(position)) * ratio ** t
    return total + ratio ** j * cycle / (1.0 - ratio ** period)


def series_gap(x: PathSpec, y: PathSpec, lab: EdgeLabeling, start: int, ratio: float, step: int = 1) -> float:
    """|periodic_series(x) - periodic_series(y)| summed from the first position where x and y differ.

    The shared head cancels exactly, so deep splits keep their relative accuracy.
    """
    split = common_prefix(x, y).length
    skip = max(0, -(-(split - start) // step))
    first = start + step * skip
    return ratio ** skip * abs(
        periodic_series(x, lab, first, step, ratio) - periodic_series(y, lab, first, step, ratio)
    )


def truncated_series(spec: PathSpec, lab: EdgeLabeling, start: int, step: int, ratio: float,
                      last: int) -> Tuple[float, float]:
    """(partial sum over positions <= last, remaining geometric weight)"""
    total = 0.0
    j = 0
    while start + step * j <= last:
        position = start + step * j
        total += lab.at(position, spec.edge_at(position)) * ratio ** j
        j += 1
    return total, ratio ** j / (1.0 - ratio)


def _last_position(spec: PathSpec, truncation: Optional[int]) -> int:
    last = spec.prefix.depth - 1
    if truncation is not None:
        last = min(last, truncation)
    return last


def lipschitz_embed(x: PathSpec, n: int, lab: EdgeLabeling, alpha: float,
                    truncation: Optional[int] = None,
                    accuracy: Optional[float] = None) -> Tuple[np.ndarray, float]:
    """F^i(x) = sum_j beta(x_{i+nj}) alpha^{nj}, i = 1..n; exact for periodic specs"""
    if n < 1:
        raise PreconditionError(f"embedding dimension must be >= 1, got {n}")
    validate_labeling(x.diagram, lab)
    ratio = alpha ** n
    point = np.zeros(n)
    if x.is_periodic and truncation is None:
        for i in range(1, n + 1):
            point[i - 1] = periodic_series(x, lab, i, n, ratio)
        return point, 0.0

    last = _last_position(x, truncation)
    base = min(lab.body)
    bound = 0.0
    for i in range(1, n + 1):
        partial, rest = truncated_series(x, lab, i, n, ratio, last)
        point[i - 1] = partial + base * rest
        bound = max(bound, lab.delta_max * rest)
    if accuracy is not None and bound > accuracy:
        raise InsufficientDepthError(
            f"truncation at position {last} leaves a tail of {bound:.3e} > {accuracy:.3e}"
        )
    return point, bound


def hoelder_embed(x: PathSpec, s: float, lab: EdgeLabeling, alpha: float,
                  truncation: Optional[int] = None,
                  accuracy: Optional[float] = None) -> Tuple[float, float]:
    """phi_s(x) = sum_{j>=0} beta(x_j) alpha^{sj}; exact for periodic specs"""
    if s <= 0:
        raise PreconditionError(f"Hoelder exponent must be positive, got {s}")
    validate_labeling(x.diagram, lab)
    ratio = alpha ** s
    if x.is_periodic and truncation is None:
        return periodic_series(x, lab, 0, 1, ratio), 0.0

    last = _last_position(x, truncation)
    partial, rest = truncated_series(x, lab, 0, 1, ratio, last)
    bound = lab.delta_max * rest
    if accuracy is not None and bound > accuracy:
        raise InsufficientDepthError(
            f"truncation at position {last} leaves a tail of {bound:.3e} > {accuracy:.3e}"
        )
    return partial + min(lab.body) * rest, bound


def embedding_ratio_bound(p: int, alpha: float) -> float:
    """-log p / log alpha: the map into R^n separates cylinders once n exceeds it"""
    return -math.log(p) / math.log(alpha)


def min_embedding_dim(p: int, alpha: float) -> int:
    """n = floor(-log p / log alpha) + 1"""
    if p < 2:
        raise PreconditionError(f"need at least two edges, got p={p}")
    if not 0.0 < alpha < 1.0:
        raise PreconditionError(f"alpha must lie in (0, 1), got {alpha}")
    return math.floor(embedding_ratio_bound(p, alpha) + 1e-9) + 1


def embedding_plan(m: SelfSimilarMetric, perron: PerronData, max_k: Optional[int] = None) -> EmbeddingPlan:
    """Smallest k whose telescoping reaches the target dimension [d_H] + 1"""
    max_k = config.PLAN_MAX_K if max_k is None else max_k
    d_h = abscissa(m, perron)
    target = math.floor(d_h + 1e-9) + 1
    basic_n = None
    best = None
    for k in range(1, max_k + 1):
        p_k = edge_count(m.diagram, k)
        alpha_k = m.alpha ** k
        n_k = min_embedding_dim(p_k, alpha_k)
        if basic_n is None:
            basic_n = n_k
        best = n_k if best is None else min(best, n_k)
        if n_k <= target:
            rhs = embedding_ratio_bound(p_k, alpha_k)
            logger.info(f"Embedding plan: k={k}, n={target} (basic n={basic_n}, p^(k)={p_k})")
            return EmbeddingPlan(k, target, basic_n, p_k, (float(target), rhs))
    logger.error(f"No telescoping up to k={max_k} reaches dimension {target}")
    raise PlanError(f"no k <= {max_k} reaches n = {target}; best n achieved is {best}")


def min_hoelder_exponent(lab: EdgeLabeling, alpha: float) -> float:
    """s* = log(delta_min / (delta_max + delta_min)) / log alpha"""
    if math.isnan(lab.delta_min):
        raise InvalidLabelingError("a single label leaves delta_min undefined")
    if lab.delta_min <= 0:
        raise InvalidLabelingError("labels are not injective (delta_min = 0)")
    return math.log(lab.delta_min / (lab.delta_max + lab.delta_min)) / math.log(alpha)


def lipschitz_constants(lab: EdgeLabeling, alpha: float, n: int) -> Tuple[float, float]:
    """(c-, c+) of the max-norm map into R^n against the regular metric alpha^{|x^y|}"""
    r = alpha ** n
    c_minus = lab.delta_min - lab.delta_max * r / (1.0 - r)
    c_plus = lab.delta_max / r / (1.0 - r)
    return c_minus, c_plus


def hoelder_constants(lab: EdgeLabeling, alpha: float, s: float) -> Tuple[float, float]:
    r = alpha ** s
    c_minus = (lab.delta_min - r * (lab.delta_min + lab.delta_max)) / (1.0 - r)
    c_plus = lab.delta_max / (1.0 - r)
    return c_minus, c_plus


def _count_violations(ratios: Iterable[float], lo: float, hi: float) -> int:
    floor = max(lo, 0.0)
    return sum(
        1 for r in ratios
        if r < floor * (1.0 - RATIO_RTOL) or r > hi * (1.0 + RATIO_RTOL)
    )


def _sampled_pairs(m: SelfSimilarMetric, samples: int, depth: int, seed: int):
    """Yield (x, y, rho(x, y)) for periodic completions of sampled pairs"""
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        a, b = sample_pair(m.diagram, depth, rng)
        x, y = complete_periodic(m.diagram, a), complete_periodic(m.diagram, b)
        yield x, y, pair_distance(m, x, y)


def pair_distance(m: SelfSimilarMetric, x: PathSpec, y: PathSpec) -> float:
    rho = distance(m, x, y)
    if rho == 0.0:
        raise ZeroDistancePairError(f"sampled pair {spec_word(x)} has zero distance")
    return rho


def lipschitz_distortion_report(m: SelfSimilarMetric, lab: EdgeLabeling, n: int, samples: int,
                                depth: int, seed: int, k: int = 1) -> DistortionReport:
    """Distortion of F over sampled pairs; with k > 1 F runs on telescope(d, k) and lab labels its edges"""
    dk = telescope(m.diagram, k) if k > 1 else m.diagram
    validate_labeling(dk, lab)
    alpha_k = m.alpha ** k
    threshold = embedding_ratio_bound(dk.p, alpha_k) if dk.p >= 2 else math.inf
    if n <= threshold:
        raise ThresholdError(
            f"n={n} does not satisfy p*alpha^n < 1 (p={dk.p}, alpha={alpha_k:.12g}); need n > {threshold:.6g}"
        )
    c_minus, c_plus = lipschitz_constants(lab, alpha_k, n)
    lo = c_minus * min(1.0, m.alpha ** (k - 1) / m.a_max)
    hi = c_plus * max(1.0, 1.0 / m.a_min)

    ratios: List[float] = []
    for x, y, rho in _sampled_pairs(m, samples, depth, seed):
        xk, yk = to_telescoped(m.diagram, dk, k, x), to_telescoped(m.diagram, dk, k, y)
        gap = max(series_gap(xk, yk, lab, i, alpha_k ** n, step=n) for i in range(1, n + 1))
        ratios.append(gap / rho)

    violations = _count_violations(ratios, lo, hi)
    if violations:
        logger.warning(f"Lipschitz distortion: {violations} of {samples} pairs outside [{lo:.6g}, {hi:.6g}]")
    return {
        "map": "lipschitz",
        "samples": samples,
        "depth": depth,
        "seed": seed,
        "exponent": 1.0,
        "empirical_min": min(ratios),
        "empirical_max": max(ratios),
        "theoretical_lo": lo,
        "theoretical_hi": hi,
        "euclidean_lo": lo,
        "euclidean_hi": math.sqrt(n) * hi,
        "lower_certified": c_minus > 0,
        "violations": violations,
    }


def hoelder_distortion_report(m: SelfSimilarMetric, lab: EdgeLabeling, s: float, samples: int,
                              depth: int, seed: int) -> DistortionReport:
    validate_labeling(m.diagram, lab)
    threshold = min_hoelder_exponent(lab, m.alpha)
    if s <= threshold:
        raise ThresholdError(f"s={s} does not exceed the Hoelder threshold s*={threshold:.6g}")
    c_minus, c_plus = hoelder_constants(lab, m.alpha, s)
    lo = c_minus * min(1.0, m.a_max ** -s)
    hi = c_plus * max(1.0, m.a_min ** -s)

    ratios: List[float] = []
    for x, y, rho in _sampled_pairs(m, samples, depth, seed):
        ratios.append(series_gap(x, y, lab, 0, m.alpha ** s) / rho ** s)

    violations = _count_violations(ratios, lo, hi)
    if violations:
        logger.warning(f"Hoelder distortion: {violations} of {samples} pairs outside [{lo:.6g}, {hi:.6g}]")
    return {
        "map": "hoelder",
        "samples": samples,
        "depth": depth,
        "seed": seed,
        "exponent": s,
        "empirical_min": min(ratios),
        "empirical_max": max(ratios),
        "theoretical_lo": lo,
        "theoretical_hi": hi,
        "euclidean_lo": None,
        "euclidean_hi": None,
        "lower_certified": c_minus > 0,
        "violations": violations,
    }


def distortion_report(kind: str, m: SelfSimilarMetric, lab: EdgeLabeling, samples: int, depth: int,
                      seed: int, n: Optional[int] = None, s: Optional[float] = None,
                      k: int = 1) -> DistortionReport:
    if kind == "lipschitz":
        if n is None:
            raise PreconditionError("Lipschitz distortion needs n")
        return lipschitz_distortion_report(m, lab, n, samples, depth, seed, k)
    if kind == "hoelder":
        if s is None:
            raise PreconditionError("Hoelder distortion needs s")
        return hoelder_distortion_report(m, lab, s, samples, depth, seed)
    raise PreconditionError(f"unknown map '{kind}'")


def _continuation_extremes(
    d: StationaryDiagram, lab: EdgeLabeling, ratio: float
) -> Tuple[List[float], List[float]]:
    """Per-vertex min and max of sum_{t>=0} beta(e_t) ratio^t over infinite paths leaving the vertex"""
    lo = [0.0] * d.q
    hi = [0.0] * d.q
    for _ in range(10_000):
        new_lo = [min(lab.body[e] + ratio * lo[d.edges[e].range] for e in d.out_edges(v)) for v in range(d.q)]
        new_hi = [max(lab.body[e] + ratio * hi[d.edges[e].range] for e in d.out_edges(v)) for v in range(d.q)]
        done = max(abs(a - b) for a, b in zip(new_lo + new_hi, lo + hi)) <= 1e-15 * max(new_hi)
        lo, hi = new_lo, new_hi
        if done:
            break
    return lo, hi


def cylinder_image_intervals(d: StationaryDiagram, lab: EdgeLabeling, alpha: float, s: float,
                             depth: int) -> List[Tuple[FinitePath, float, float]]:
    """[min, max] of phi_s over every cylinder of Pi_depth"""
    validate_labeling(d, lab)
    ratio = alpha ** s
    lo, hi = _continuation_extremes(d, lab, ratio)
    intervals = []
    for path in enumerate_paths(d, depth):
        partial = sum(lab.at(j, path.edge_at(j)) * ratio ** j for j in range(path.depth))
        vertex = d.range_of(path)
        scale = ratio ** path.depth
        intervals.append((path, partial + scale * lo[vertex], partial + scale * hi[vertex]))
    return intervals


def images_disjoint(intervals: List[Tuple[FinitePath, float, float]]) -> bool:
    ordered = sorted(intervals, key=lambda item: item[1])
    return all(nxt[1] > cur[2] for cur, nxt in zip(ordered, ordered[1:]))


def embed_point_cloud(m: SelfSimilarMetric, lab: EdgeLabeling, samples: int, depth: int, seed: int,
                      n: Optional[int] = None, s: Optional[float] = None, k: int = 1) -> List[List[Any]]:
    """Rows [path word, coordinates...] for sampled points completed periodically"""
    dk = telescope(m.diagram, k) if k > 1 else m.diagram
    rng = np.random.default_rng(seed)
    rows: List[List[Any]] = []
    for _ in range(samples):
        x = complete_periodic(m.diagram, random_path(m.diagram, depth, rng))
        if n is not None:
            point, _ = lipschitz_embed(to_telescoped(m.diagram, dk, k, x), n, lab, m.alpha ** k)
            rows.append([spec_word(x)] + [float(c) for c in point])
        else:
            value, _ = hoelder_embed(x, s, lab, m.alpha)
            rows.append([spec_word(x), value])
    return rows
