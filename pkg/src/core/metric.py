"""
Self-similar ultrametrics on the path space of a stationary diagram.

rho(x, y) = a_{r(x^y)} alpha^{|x^y|}, with the whole space at diameter 1
(paths that already differ at the root edge are at distance 1).
"""

import logging
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

from ..helpers.errors import ConfigError, PreconditionError, UndecidableDistanceError
from .base import FinitePath, PathSpec, PerronData, SelfSimilarMetric, StationaryDiagram
from .diagram import common_prefix

logger = logging.getLogger(__name__)

METRIC_MODES = ("regular", "substitution", "tiling", "scaled")

# slack for the weight check on metrics derived from floating-point Perron data
_WEIGHT_TOL = 1e-12


def _validate(m: SelfSimilarMetric) -> SelfSimilarMetric:
    if not 0.0 < m.alpha < 1.0:
        raise PreconditionError(f"alpha must lie in (0, 1), got {m.alpha}")
    if len(m.scale) != m.diagram.q or min(m.scale) <= 0.0:
        raise PreconditionError("scales must be positive, one per vertex")
    for v, a in enumerate(m.scale):
        if a * m.alpha > 1.0 + _WEIGHT_TOL:
            raise PreconditionError(
                f"scale of vertex {m.diagram.label(v)} gives a first-level cylinder of diameter "
                f"{a * m.alpha:.6g} > 1"
            )
    for edge in m.diagram.edges:
        child = m.scale[edge.range] * m.alpha
        parent = m.scale[edge.source]
        if child > parent * (1.0 + _WEIGHT_TOL):
            raise PreconditionError(
                f"not a weight: edge {edge.name} grows the diameter "
                f"(a_r*alpha = {child:.6g} > a_s = {parent:.6g})"
            )
    return m


def regular_metric(d: StationaryDiagram, alpha: float) -> SelfSimilarMetric:
    return _validate(SelfSimilarMetric(d, alpha, (1.0,) * d.q, "regular"))


def substitution_metric(d: StationaryDiagram, perron: PerronData) -> SelfSimilarMetric:
    """a_v = nu_v, alpha = 1/Lambda"""
    return _validate(SelfSimilarMetric(d, 1.0 / perron.lam, tuple(perron.nu), "substitution"))


def tiling_metric(d: StationaryDiagram, perron: PerronData, dim: int) -> SelfSimilarMetric:
    """a_v = nu_v^{1/dim}, alpha = Lambda^{-1/dim}"""
    if not isinstance(dim, int) or dim < 1:
        raise PreconditionError(f"tiling dimension must be a positive integer, got {dim!r}")
    scale = tuple(nu ** (1.0 / dim) for nu in perron.nu)
    return _validate(SelfSimilarMetric(d, perron.lam ** (-1.0 / dim), scale, "tiling", dim))


def scaled_metric(d: StationaryDiagram, alpha: float, scale: Sequence[float]) -> SelfSimilarMetric:
    return _validate(SelfSimilarMetric(d, alpha, tuple(float(a) for a in scale), "scaled"))


def metric_from_config(d: StationaryDiagram, block: Mapping[str, Any],
                       perron: Optional[PerronData] = None) -> SelfSimilarMetric:
    """Build the metric described by a config block such as {"mode": "tiling", "d": 1}"""
    mode = block.get("mode")
    if mode not in METRIC_MODES:
        raise ConfigError(f"metric.mode: expected one of {', '.join(METRIC_MODES)}, got {mode!r}")

    def number(key: str) -> float:
        value = block.get(key)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"metric.{key}: expected a number for mode '{mode}'")
        return float(value)

    if mode == "regular":
        return regular_metric(d, number("alpha"))
    if mode == "scaled":
        raw = block.get("scale")
        if isinstance(raw, dict):
            try:
                scale = [float(raw[v.label]) for v in d.vertices]
            except (KeyError, TypeError, ValueError):
                raise ConfigError("metric.scale: expected a number for every vertex label")
        elif isinstance(raw, list) and len(raw) == d.q:
            scale = [float(a) for a in raw]
        else:
            raise ConfigError("metric.scale: expected a list or a mapping label -> scale")
        return scaled_metric(d, number("alpha"), scale)

    if perron is None:
        raise PreconditionError(f"metric mode '{mode}' needs Perron data")
    if mode == "substitution":
        return substitution_metric(d, perron)
    dim = block.get("d")
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise ConfigError("metric.d: expected a positive integer tile dimension")
    return tiling_metric(d, perron, dim)


def metric_to_json(m: SelfSimilarMetric) -> Dict[str, Any]:
    return {
        "mode": m.mode,
        "alpha": m.alpha,
        "scale": list(m.scale),
        "d": m.tile_dim,
    }


def cylinder_diameter(m: SelfSimilarMetric, path: FinitePath) -> float:
    if path.root is None:
        return 1.0
    return m.scale[m.diagram.range_of(path)] * m.alpha ** path.depth


def distance(m: SelfSimilarMetric, x: PathSpec, y: PathSpec, max_depth: Optional[int] = None) -> float:
    result = common_prefix(x, y, max_depth)
    if result.exact:
        return cylinder_diameter(m, result.prefix)
    if result.equal:
        return 0.0
    raise UndecidableDistanceError(
        f"paths agree on the first {result.length} edges and cannot be told apart"
    )


def regularize_bounds(m: SelfSimilarMetric) -> Tuple[float, float]:
    """(a/a', a'/a) with a = min a_v, a' = max a_v"""
    return m.a_min / m.a_max, m.a_max / m.a_min


def telescoped_distance(m: SelfSimilarMetric, x: PathSpec, y: PathSpec, k: int,
                        max_depth: Optional[int] = None) -> float:
    """Distance read off the telescoped diagram: smallest common cylinder of depth divisible by k"""
    if k < 1:
        raise PreconditionError(f"telescoping exponent must be >= 1, got {k}")
    result = common_prefix(x, y, max_depth)
    if not result.exact:
        if result.equal:
            return 0.0
        raise UndecidableDistanceError(
            f"paths agree on the first {result.length} edges and cannot be told apart"
        )
    blocks = result.length // k
    return cylinder_diameter(m, result.prefix.truncate(blocks * k))
