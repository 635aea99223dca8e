# Type definitions for cantorlab reports

from .schemas import (
    PerronReport,
    CantorReport,
    InfoReport,
    ZetaReport,
    DimReport,
    DistortionReport,
    PlanReport,
    TechReport,
    ThresholdReport,
    SpectrumReport,
    CheckResult,
    VerifyReport,
)

__all__ = [
    "PerronReport",
    "CantorReport",
    "InfoReport",
    "ZetaReport",
    "DimReport",
    "DistortionReport",
    "PlanReport",
    "TechReport",
    "ThresholdReport",
    "SpectrumReport",
    "CheckResult",
    "VerifyReport",
]
