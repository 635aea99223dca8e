"""
Zeta function, abscissa of convergence, Hausdorff dimension and the covering oracle.

Level sums L_n(s) = sum over Pi_n of diam^s are obtained by transferring
per-vertex path counts (c_1 = 1, c_{n+1} = A^T c_n) rather than by
enumerating paths.
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from .. import config
from ..helpers.errors import (
    DegenerateDiagramError,
    EnumerationCapError,
    InsufficientDepthError,
    PreconditionError,
)
from ..types.schemas import DimReport, ZetaReport
from .base import FinitePath, PerronData, SelfSimilarMetric
from .diagram import count_paths, enumerate_paths, extensions
from .metric import cylinder_diameter

logger = logging.getLogger(__name__)


def _vertex_counts(m: SelfSimilarMetric, n_max: int) -> List[np.ndarray]:
    """Per-vertex path counts c_n for n = 1..n_max (index 0 unused)"""
    matrix = m.diagram.matrix.astype(float)
    counts: List[np.ndarray] = [np.zeros(m.diagram.q)]
    current = np.ones(m.diagram.q)
    for _ in range(n_max):
        counts.append(current)
        current = matrix.T @ current
    return counts


def level_sums(m: SelfSimilarMetric, s: float, n_max: int) -> List[float]:
    """[L_0(s), ..., L_N(s)], L_0 = 1 for the whole space"""
    scale = np.asarray(m.scale) ** s
    counts = _vertex_counts(m, n_max)
    sums = [1.0]
    for n in range(1, n_max + 1):
        sums.append(float(counts[n] @ scale) * m.alpha ** (n * s))
    return sums


def zeta_partial(m: SelfSimilarMetric, s: float, n_max: int, method: str = "transfer") -> ZetaReport:
    """Partial sum of the zeta series over Pi_0 .. Pi_N"""
    if s <= 0:
        raise PreconditionError(f"zeta needs s > 0, got {s}")
    if n_max < 0:
        raise PreconditionError(f"depth must be >= 0, got {n_max}")
    if method == "transfer":
        sums = level_sums(m, s, n_max)
    elif method == "enumerate":
        sums = [
            sum(cylinder_diameter(m, path) ** s for path in enumerate_paths(m.diagram, n))
            for n in range(n_max + 1)
        ]
    else:
        raise PreconditionError(f"unknown zeta method '{method}'")
    ratio = sums[-1] / sums[-2] if n_max >= 1 else None
    return {"s": s, "N": n_max, "partial_sum": math.fsum(sums), "growth_ratio": ratio}


def abscissa(m: SelfSimilarMetric, perron: PerronData) -> float:
    """s0 = log Lambda / (-log alpha)"""
    if perron.lam <= 1.0 + 1e-12:
        raise DegenerateDiagramError(
            f"Perron eigenvalue {perron.lam:.12g} <= 1: the path space is not a Cantor set"
        )
    return math.log(perron.lam) / -math.log(m.alpha)


def _growth_ratio(m: SelfSimilarMetric, s: float, n_max: int) -> Tuple[float, float]:
    """(L_N/L_{N-1}, L_{N-1}/L_{N-2}) at exponent s"""
    sums = level_sums(m, s, n_max)
    previous = sums[-2] / sums[-3] if n_max >= 2 else sums[-2]
    return sums[-1] / sums[-2], previous


def abscissa_numeric(m: SelfSimilarMetric, n_max: int, epsilon: float) -> Tuple[float, float]:
    """Bracket [lo, hi] of width <= epsilon around the root of the level-sum growth ratio"""
    if epsilon <= 0:
        raise PreconditionError(f"bracket tolerance must be positive, got {epsilon}")
    if n_max < 2:
        raise InsufficientDepthError(f"growth ratio needs depth N >= 2, got {n_max}")

    def ratio(s: float) -> float:
        return _growth_ratio(m, s, n_max)[0]

    if ratio(0.0) <= 1.0:
        raise DegenerateDiagramError("path counts do not grow: the zeta series has no finite abscissa")

    lo, hi = 0.0, 1.0
    while ratio(hi) >= 1.0:
        lo, hi = hi, hi * 2.0
        if hi > 1e6:
            raise InsufficientDepthError("no convergent exponent found below 1e6")
    steps = 0
    while hi - lo > epsilon:
        mid = 0.5 * (lo + hi)
        if ratio(mid) >= 1.0:
            lo = mid
        else:
            hi = mid
        steps += 1

    r_lo, prev_lo = _growth_ratio(m, lo, n_max)
    r_hi, prev_hi = _growth_ratio(m, hi, n_max)
    drift = max(abs(r_lo - prev_lo), abs(r_hi - prev_hi))
    gap = r_lo - r_hi
    if drift >= gap:
        raise InsufficientDepthError(
            f"growth ratio still drifts by {drift:.3e} at depth {n_max}, more than the bracket gap "
            f"{gap:.3e}; increase the depth or epsilon"
        )
    logger.debug(f"Abscissa bracket [{lo:.12g}, {hi:.12g}] after {steps} bisection steps")
    return lo, hi


def _cover_cost(m: SelfSimilarMetric, vertex: int, depth: int, d: float) -> float:
    # cover pieces measured in the first-level scale
    return (m.scale[vertex] * m.alpha ** (depth - 1)) ** d


def hausdorff_content_depth(m: SelfSimilarMetric, d: float, depth: int, method: str = "collapsed") -> float:
    """Least sum of diam^d over clopen partitions into cylinders at most `depth` levels below the first"""
    if d < 0 or depth < 0:
        raise PreconditionError("content needs d >= 0 and depth >= 0")
    if method == "tree":
        return _content_tree(m, d, depth)
    if method != "collapsed":
        raise PreconditionError(f"unknown content method '{method}'")

    diagram = m.diagram
    leaf = depth + 1
    h = [_cover_cost(m, v, leaf, d) for v in range(diagram.q)]
    for level in range(leaf - 1, 0, -1):
        h = [
            min(_cover_cost(m, v, level, d), math.fsum(diagram.adjacency[v][w] * h[w] for w in range(diagram.q)))
            for v in range(diagram.q)
        ]
    return min(1.0, math.fsum(h))


def _content_tree(m: SelfSimilarMetric, d: float, depth: int) -> float:
    leaf = depth + 1
    total = count_paths(m.diagram, leaf)
    if total > config.enum_cap():
        raise EnumerationCapError(f"tree content at depth {depth} needs {total} leaves, above the cap")

    def cost(path: FinitePath) -> float:
        if path.root is None:
            return 1.0
        return _cover_cost(m, m.diagram.range_of(path), path.depth, d)

    def solve(path: FinitePath) -> float:
        if path.depth == leaf:
            return cost(path)
        children = math.fsum(solve(path.extend(e)) for e in extensions(m.diagram, path, validate=False))
        return min(cost(path), children)

    return solve(FinitePath())


def hausdorff_dimension(m: SelfSimilarMetric, perron: PerronData) -> float:
    return abscissa(m, perron)


def content_curve(m: SelfSimilarMetric, s0: float, depth: int,
                  offsets: Tuple[float, ...] = (-0.1, 0.0, 0.1)) -> List[List[float]]:
    """[[d, D, content]] for d around s0 and D = 0..depth"""
    rows = []
    for offset in offsets:
        d = max(s0 + offset, 0.0)
        for D in range(depth + 1):
            rows.append([d, D, hausdorff_content_depth(m, d, D)])
    return rows


def dimension_report(m: SelfSimilarMetric, perron: PerronData, n_max: int, epsilon: float,
                     content_depth: int, zeta_exponents: Optional[List[float]] = None) -> DimReport:
    s0 = abscissa(m, perron)
    lo, hi = abscissa_numeric(m, n_max, epsilon)
    dims_equal = lo - 1e-12 <= s0 <= hi + 1e-12
    if not dims_equal:
        logger.warning(f"Numeric bracket [{lo:.6g}, {hi:.6g}] misses the closed form {s0:.6g}")
    exponents = zeta_exponents or [s0 + 0.5, s0 + 1.0]
    return {
        "s0_closed": s0,
        "s0_numeric": [lo, hi],
        "dims_equal": dims_equal,
        "hausdorff_dimension": hausdorff_dimension(m, perron),
        "depth": n_max,
        "epsilon": epsilon,
        "content_curve": content_curve(m, s0, content_depth),
        "zeta": [zeta_partial(m, s, n_max) for s in exponents],
    }
