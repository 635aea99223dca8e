"""
Type definitions for cantorlab reports.
"""

from typing import Any, Dict, List, Optional
from typing_extensions import TypedDict


# "lambda" is a keyword, hence the functional form
PerronReport = TypedDict(
    "PerronReport",
    {"lambda": float, "nu": List[float], "residual": float, "iterations": int},
)


class CantorReport(TypedDict):
    hypothesis_ok: bool
    perfect: bool
    cantor: bool


class InfoReport(TypedDict, total=False):
    """Output of `info`"""
    name: str
    vertices: List[str]
    edge_count: int
    adjacency: List[List[int]]
    primitive: bool
    primitive_witness: Optional[int]
    perron: Optional[PerronReport]
    cantor: CantorReport
    metric: Dict[str, Any]
    path_counts: List[int]


class ZetaReport(TypedDict):
    s: float
    N: int
    partial_sum: float
    growth_ratio: Optional[float]


class DimReport(TypedDict, total=False):
    """Output of `dim`"""
    s0_closed: float
    s0_numeric: List[float]
    dims_equal: bool
    hausdorff_dimension: float
    depth: int
    epsilon: float
    content_curve: List[List[float]]
    zeta: List[ZetaReport]


class DistortionReport(TypedDict, total=False):
    """Two-sided distortion check of an embedding over sampled path pairs"""
    map: str
    samples: int
    depth: int
    seed: int
    exponent: float
    empirical_min: float
    empirical_max: float
    theoretical_lo: float
    theoretical_hi: float
    euclidean_lo: Optional[float]
    euclidean_hi: Optional[float]
    lower_certified: bool
    violations: int
    tech: bool


class PlanReport(TypedDict):
    k: int
    n: int
    basic_n: int
    p_k: int
    inequality: List[float]


class TechReport(TypedDict):
    """Tech-condition scan over a grid of exponents"""
    edges_simple: bool
    nu_distinct: bool
    s_grid: List[float]
    beta_separated: List[bool]
    s1_estimate: Optional[float]
    passed: bool


class ThresholdReport(TypedDict, total=False):
    basic: float
    telescoped: float
    labeling: Optional[float]
    effective: float


class SpectrumReport(TypedDict, total=False):
    """Output of `spectrum`"""
    s: float
    s0: float
    lambda_s: float
    bounded: bool
    depth: int
    mode: str
    eigenvalue_count: int
    omega_count: int
    omega_min: float
    omega_max: float
    tech: TechReport
    thresholds: ThresholdReport
    distortion: Optional[DistortionReport]


class CheckResult(TypedDict, total=False):
    """Outcome of one invariant check of `verify`"""
    status: str  # "success", "warning", "error"
    message: str
    detail: str
    checked: int
    violations: int
    error_type: str  # set when a precondition stopped the check
    tech: bool
    lower_certified: bool


class VerifyReport(TypedDict):
    overall_status: str
    checks: Dict[str, CheckResult]
    error_count: int
    warning_count: int
