"""
Eigenvalues of the path-space Laplacian, the omega-spectrum and the tech condition.

Eigenvalues are seed-relative: the per-vertex seed eigenvalues default to 0
and only enter finite-depth eigenvalues, never the omega-spectrum.
"""

import logging
import math
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .. import config
from ..helpers.errors import (
    EnumerationCapError,
    InvalidLabelingError,
    MissingLabelError,
    PreconditionError,
    UnboundedRegimeError,
)
from ..types.schemas import DistortionReport, TechReport, ThresholdReport
from .base import (
    EdgeLabeling,
    EigenRecord,
    FinitePath,
    Measure,
    PathSpec,
    PerronData,
    SelfSimilarMetric,
    SpectrumParams,
    StationaryDiagram,
)
from .diagram import complete_periodic, count_paths, enumerate_paths, extensions, random_path, sample_pair
from .dimension import abscissa
from .embed import RATIO_RTOL, pair_distance, periodic_series, series_gap

logger = logging.getLogger(__name__)


def lambda_s(s: float, s0: float, alpha: float) -> float:
    """Lambda_s = alpha^{s - s0 - 2}"""
    if not 0.0 < alpha < 1.0:
        raise PreconditionError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha ** (s - s0 - 2.0)


def is_bounded(s: float, s0: float) -> bool:
    """s > s0 + 2: Lambda_s < 1 and the Laplacian is bounded"""
    return s > s0 + 2.0


class MeasureBeta:
    """beta(e, s) = nu_{r(e)} / (Lambda nu_{s(e)}), the measure ratio of the cylinders; independent of s"""

    def __init__(self, d: StationaryDiagram, perron: PerronData):
        self.values = tuple(perron.nu[e.range] / (perron.lam * perron.nu[e.source]) for e in d.edges)
        if len(set(round(v, 12) for v in self.values)) < len(self.values):
            logger.warning(
                "Measure-ratio beta is not injective on this diagram; eigenvalues will be degenerate"
            )

    def __call__(self, edge: int, s: float) -> float:
        return self.values[edge]


class TableBeta:
    """beta read from a table, either constant or tabulated per exponent (nearest s wins)"""

    def __init__(self, tables: Mapping[Optional[float], Sequence[float]]):
        if not tables:
            raise InvalidLabelingError("beta table is empty")
        self.tables = {key: tuple(values) for key, values in tables.items()}

    def __call__(self, edge: int, s: float) -> float:
        if None in self.tables:
            return self.tables[None][edge]
        nearest = min(self.tables, key=lambda key: (abs(key - s), key))
        return self.tables[nearest][edge]

    @classmethod
    def from_json(cls, d: StationaryDiagram, obj: Any) -> "TableBeta":
        """{"edges": {name|id: value}} or {"tables": [{"s": 5.0, "edges": {...}}, ...]}"""

        def read(edges: Any) -> Tuple[float, ...]:
            if not isinstance(edges, Mapping):
                raise InvalidLabelingError("beta: expected an 'edges' mapping")
            by_key = {str(k): v for k, v in edges.items()}
            values = []
            for edge in d.edges:
                value = by_key.get(edge.name, by_key.get(str(edge.id)))
                if value is None:
                    raise MissingLabelError(f"beta: no value for edge {edge.name} (id {edge.id})")
                if not float(value) > 0:
                    raise InvalidLabelingError(f"beta: value for edge {edge.name} must be positive")
                values.append(float(value))
            return tuple(values)

        if not isinstance(obj, Mapping):
            raise InvalidLabelingError("beta: expected a JSON object")
        if "tables" in obj:
            return cls({float(entry["s"]): read(entry.get("edges")) for entry in obj["tables"]})
        return cls({None: read(obj.get("edges"))})


def default_beta(d: StationaryDiagram, meas: Measure) -> MeasureBeta:
    return MeasureBeta(d, meas.perron)


def seeds_from_json(d: StationaryDiagram, obj: Any) -> Tuple[float, ...]:
    """{label: seed eigenvalue}; unlisted vertices keep seed 0"""
    if not isinstance(obj, Mapping):
        raise InvalidLabelingError("seeds: expected a mapping vertex label -> value")
    unknown = [key for key in obj if key not in {v.label for v in d.vertices}]
    if unknown:
        raise InvalidLabelingError(f"seeds: unknown vertex labels {', '.join(map(str, unknown))}")
    return tuple(float(obj.get(v.label, 0.0)) for v in d.vertices)


def spectrum_params(m: SelfSimilarMetric, perron: PerronData, s: float, beta=None,
                    seeds: Sequence[float] = ()) -> SpectrumParams:
    s0 = abscissa(m, perron)
    if beta is None:
        beta = MeasureBeta(m.diagram, perron)
    value = lambda_s(s, s0, m.alpha)
    if not is_bounded(s, s0):
        logger.warning(f"s={s} <= s0+2={s0 + 2:.6g}: Lambda_s={value:.6g} >= 1, unbounded regime")
    return SpectrumParams(s, s0, m.alpha, value, beta, tuple(seeds))


def eigenvalue(d: StationaryDiagram, path: FinitePath, params: SpectrumParams) -> EigenRecord:
    """lambda_gamma(s) over the body edges e_1..e_n of gamma, seed read at s(e_n)"""
    if not path.body:
        raise PreconditionError("eigenvalue needs a path with at least one body edge")
    n = len(path.body)
    tail_edge = d.edges[path.body[-1]]
    value = params.lambda_s ** n * params.seed(tail_edge.source)
    value += math.fsum(
        params.lambda_s ** (j - 1) * params.beta(e, params.s) for j, e in enumerate(path.body, start=1)
    )
    return EigenRecord(path, value, len(extensions(d, path)) - 1)


def eigen_table(d: StationaryDiagram, params: SpectrumParams, depth: int) -> List[EigenRecord]:
    """Eigenvalues of every path of depth 2..depth, sorted by value"""
    records = [
        eigenvalue(d, path, params)
        for n in range(2, depth + 1)
        for path in enumerate_paths(d, n)
    ]
    return sorted(records, key=lambda r: (r.value, r.path.depth, r.path.root, r.path.body))


def eigen_count(d: StationaryDiagram, n: int) -> int:
    """1 + sum_{k<=n} sum_{gamma in Pi_k} (n_gamma - 1), the eigenvalue count down to depth n"""
    total = 1
    for k in range(n + 1):
        for path in enumerate_paths(d, k):
            total += len(extensions(d, path, validate=False)) - 1
    return total


def _require_bounded(params: SpectrumParams):
    if not is_bounded(params.s, params.s0):
        raise UnboundedRegimeError(
            f"s={params.s} <= s0+2={params.s0 + 2:.6g}: "
            f"Lambda_s={params.lambda_s:.6g} >= 1 and the series diverges"
        )


def _beta_labeling(d: StationaryDiagram, params: SpectrumParams) -> EdgeLabeling:
    return EdgeLabeling(tuple(params.beta(e.id, params.s) for e in d.edges), ())


def omega_point(x: PathSpec, params: SpectrumParams) -> float:
    """lambda_x(s) = sum_{j>=1} beta(x_j, s) Lambda_s^{j-1}, exact for a periodic spec"""
    _require_bounded(params)
    if not x.is_periodic:
        raise PreconditionError("omega_point needs a periodic spec")
    return periodic_series(x, _beta_labeling(x.diagram, params), 1, 1, params.lambda_s)


def omega_spectrum(d: StationaryDiagram, params: SpectrumParams, depth: int, mode: str = "enumerate",
                   budget: int = 1000, seed: int = 0) -> List[Tuple[float, float]]:
    """Sorted distinct (value, tail bound) approximations of omega-spectrum points.

    enumerate: partial sums over every path of Pi_depth, bound sup(beta) Lambda_s^n / (1 - Lambda_s)
    sample: `budget` sampled paths completed periodically, evaluated exactly
    """
    _require_bounded(params)
    if depth < 2:
        raise PreconditionError(f"omega-spectrum needs depth >= 2, got {depth}")
    lab = _beta_labeling(d, params)
    points: Dict[str, Tuple[float, float]] = {}

    def add(value: float, bound: float):
        key = f"{value:.{config.FLOAT_DIGITS}g}"
        if key not in points or bound < points[key][1]:
            points[key] = (value, bound)

    if mode == "enumerate":
        total = count_paths(d, depth)
        if total > budget:
            raise EnumerationCapError(f"#Pi_{depth} = {total} exceeds the spectrum budget {budget}")
        sup_beta = max(lab.body)
        for path in enumerate_paths(d, depth):
            n = len(path.body)
            partial = math.fsum(
                params.lambda_s ** (j - 1) * lab.body[e] for j, e in enumerate(path.body, start=1)
            )
            add(partial, sup_beta * params.lambda_s ** n / (1.0 - params.lambda_s))
    elif mode == "sample":
        rng = np.random.default_rng(seed)
        for _ in range(budget):
            x = complete_periodic(d, random_path(d, depth, rng))
            add(periodic_series(x, lab, 1, 1, params.lambda_s), 0.0)
    else:
        raise PreconditionError(f"unknown omega-spectrum mode '{mode}'")

    if len(points) == 1:
        logger.warning(
            "omega-spectrum collapsed to a single point; the diagram is too symmetric for this beta"
        )
    return sorted(points.values())


def omega_constants(lab: EdgeLabeling, lam_s: float) -> Tuple[float, float]:
    c_minus = (lab.delta_min - lam_s * (lab.delta_min + lab.delta_max)) / (1.0 - lam_s)
    c_plus = lab.delta_max / (1.0 - lam_s)
    return c_minus, c_plus


def omega_distortion_report(m: SelfSimilarMetric, params: SpectrumParams, samples: int, depth: int,
                            seed: int) -> DistortionReport:
    """Two-sided Hoelder check of x -> lambda_x(s) with exponent t = s - s0 - 2"""
    _require_bounded(params)
    d = m.diagram
    lab = _beta_labeling(d, params)
    if math.isnan(lab.delta_min) or lab.delta_min <= 0:
        raise InvalidLabelingError("beta at this s does not separate the edges")
    t = params.s - params.s0 - 2.0
    lam_s = params.lambda_s
    c_minus, c_plus = omega_constants(lab, lam_s)
    lo = c_minus * min(1.0, m.a_max ** -t / lam_s)
    hi = c_plus * max(1.0, m.a_min ** -t / lam_s)
    if c_minus <= 0:
        logger.warning(f"omega-spectrum lower constant c-={c_minus:.6g} is not positive at s={params.s}")

    rng = np.random.default_rng(seed)
    ratios = []
    for _ in range(samples):
        a, b = sample_pair(d, depth, rng)
        x, y = complete_periodic(d, a), complete_periodic(d, b)
        rho = pair_distance(m, x, y)
        gap = series_gap(x, y, lab, 1, lam_s)
        ratios.append(gap / rho ** t)

    floor = max(lo, 0.0)
    violations = sum(1 for r in ratios if r < floor * (1.0 - RATIO_RTOL) or r > hi * (1.0 + RATIO_RTOL))
    return {
        "map": "omega",
        "samples": samples,
        "depth": depth,
        "seed": seed,
        "exponent": t,
        "empirical_min": min(ratios),
        "empirical_max": max(ratios),
        "theoretical_lo": lo,
        "theoretical_hi": hi,
        "euclidean_lo": None,
        "euclidean_hi": None,
        "lower_certified": c_minus > 0,
        "violations": violations,
    }


def tech_grid(s0: float, points: Optional[int] = None) -> List[float]:
    """`points` exponents evenly spaced on (s0 + 2, s0 + 12]"""
    points = config.TECH_GRID_POINTS if points is None else points
    return [s0 + 2.0 + 10.0 * i / points for i in range(1, points + 1)]


def _separated(d: StationaryDiagram, beta, s: float, tol: float) -> bool:
    values = [beta(e.id, s) for e in d.edges]
    for e in d.edges:
        for f in d.edges[e.id + 1:]:
            if abs(values[e.id] - values[f.id]) > tol:
                continue
            # equal labels must be told apart one generation further
            for e2 in d.out_edges(e.range):
                for f2 in d.out_edges(f.range):
                    if abs(values[e2] - values[f2]) <= tol:
                        return False
    return True


def check_tech(d: StationaryDiagram, perron: PerronData, beta, s_grid: Sequence[float]) -> TechReport:
    tol = config.NU_DISTINCT_TOL
    edges_simple = all(entry <= 1 for row in d.adjacency for entry in row)
    nu = perron.nu
    nu_distinct = all(abs(nu[i] - nu[j]) > tol for i in range(d.q) for j in range(i + 1, d.q))
    separated = [_separated(d, beta, s, tol) for s in s_grid]

    s1 = None
    for i in range(len(s_grid)):
        if all(separated[i:]):
            s1 = s_grid[i]
            break
    passed = edges_simple and nu_distinct and all(separated)
    if not passed:
        logger.warning(
            f"Tech condition fails: edges_simple={edges_simple}, nu_distinct={nu_distinct}, "
            f"beta separated on {sum(separated)}/{len(separated)} grid points"
        )
    return {
        "edges_simple": edges_simple,
        "nu_distinct": nu_distinct,
        "s_grid": list(s_grid),
        "beta_separated": separated,
        "s1_estimate": s1,
        "passed": passed,
    }


def hoelder_thresholds(d_tile: float, p: int, lam: float, s1: Optional[float] = None) -> ThresholdReport:
    """basic = d + 2 + d log p / log Lambda, telescoped = 2(d + 1); effective = max(basic, s1)"""
    if lam <= 1.0:
        raise PreconditionError(f"thresholds need Lambda > 1, got {lam}")
    basic = d_tile + 2.0 + d_tile * math.log(p) / math.log(lam)
    effective = basic if s1 is None else max(basic, s1)
    return {"basic": basic, "telescoped": 2.0 * (d_tile + 1.0), "effective": effective}


def labeling_threshold(d_tile: float, beta, s: float, d: StationaryDiagram, lam: float) -> float:
    """d + 2 + d log(1 + delta_max / delta_min) / log Lambda for the actual beta at s"""
    lab = EdgeLabeling(tuple(beta(e.id, s) for e in d.edges), ())
    if math.isnan(lab.delta_min) or lab.delta_min <= 0:
        return math.inf
    return d_tile + 2.0 + d_tile * math.log(1.0 + lab.delta_max / lab.delta_min) / math.log(lam)
