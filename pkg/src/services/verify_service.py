"""
Verify Service Module
Runs the invariant suite of a configured diagram and metric
"""

import logging
import math
from typing import Any, Callable, Dict, Optional

import numpy as np

from .. import config
from ..core import (
    MeasureBeta,
    abscissa,
    abscissa_numeric,
    check_tech,
    complete_periodic,
    count_paths,
    cylinder_image_intervals,
    default_labeling,
    distance,
    eigen_count,
    eigenvalue,
    embedding_plan,
    enumerate_paths,
    extensions,
    hausdorff_content_depth,
    hoelder_distortion_report,
    hoelder_thresholds,
    images_disjoint,
    lipschitz_distortion_report,
    measure,
    min_embedding_dim,
    min_hoelder_exponent,
    omega_distortion_report,
    regular_metric,
    sample_pair,
    spectrum_params,
    tech_grid,
    telescope,
    telescoped_distance,
)
from ..core.base import Measure, SpectrumParams
from ..core.diagram import random_path
from ..core.perron import cylinder_mass_total
from ..helpers.errors import (
    InvariantViolationError,
    NotPrimitiveError,
    PlanError,
    PreconditionError,
    TechConditionError,
)
from ..helpers.utils import Utils
from ..types.schemas import CheckResult, VerifyReport
from .report_service import RunContext

logger = logging.getLogger(__name__)

# relative slack of the measure identities
MASS_RTOL = 1e-12
TINY = np.finfo(float).tiny


def _result(checked: int, violations: int, message: str, detail: Optional[str] = None) -> CheckResult:
    return {
        "status": "error" if violations else "success",
        "message": message if not violations else f"{message}: {violations} violation(s)",
        "detail": detail,
        "checked": checked,
        "violations": violations,
    }


class VerifyService:
    """Service for running the invariant checks of a run"""

    def __init__(self, ctx: RunContext):
        if ctx.perron is None or ctx.metric is None:
            raise NotPrimitiveError(f"verify needs a primitive diagram; {ctx.diagram.name} is not")
        self.ctx = ctx
        self.block = ctx.run.verify
        self.results: Dict[str, Any] = {"checks": {}, "overall_status": "unknown"}
        self.failures: Dict[str, PreconditionError] = {}

    @property
    def _max_n(self) -> int:
        """Largest depth whose paths can be enumerated under the cap"""
        n = self.block["max_n"]
        while n > 0 and count_paths(self.ctx.diagram, n + 1) > config.enum_cap():
            n -= 1
        return n

    def check_perron(self) -> CheckResult:
        """Eigen-equation residual and normalization of nu"""
        data = self.ctx.perron
        violations = 0
        if data.residual > config.PERRON_TOL * data.lam:
            violations += 1
        if abs(math.fsum(data.nu) - 1.0) > MASS_RTOL or min(data.nu) <= 0:
            violations += 1
        return _result(2, violations, "Perron data consistent",
                       f"lambda={Utils.format_float(data.lam)}, residual={data.residual:.3e}")

    def check_path_counts(self) -> CheckResult:
        d = self.ctx.diagram
        violations = 0
        for n in range(self._max_n + 1):
            if len(enumerate_paths(d, n)) != count_paths(d, n):
                violations += 1
        return _result(self._max_n + 1, violations, "Path counts match enumeration")

    def check_measure_additivity(self) -> CheckResult:
        """mu[gamma] = sum of mu over its one-step extensions"""
        d = self.ctx.diagram
        meas = Measure(self.ctx.perron, d)
        checked = violations = 0
        for n in range(self._max_n):
            for path in enumerate_paths(d, n):
                total = math.fsum(measure(meas, path.extend(e)) for e in extensions(d, path, validate=False))
                mass = measure(meas, path)
                checked += 1
                if abs(total - mass) > MASS_RTOL * max(mass, TINY):
                    violations += 1
        return _result(checked, violations, "Measure additive on cylinders")

    def check_total_mass(self) -> CheckResult:
        meas = Measure(self.ctx.perron, self.ctx.diagram)
        violations = sum(
            1 for n in range(self._max_n + 1) if abs(cylinder_mass_total(meas, n) - 1.0) > MASS_RTOL
        )
        return _result(self._max_n + 1, violations, "Total mass equals 1 at every depth")

    def _pairs(self, samples: int):
        d = self.ctx.diagram
        rng = np.random.default_rng(self.ctx.run.seed)
        for _ in range(samples):
            a, b = sample_pair(d, self.block["depth"], rng)
            yield complete_periodic(d, a), complete_periodic(d, b)

    def check_ultrametric(self) -> CheckResult:
        """rho(x, y) <= max(rho(x, z), rho(z, y)) on sampled triples sharing x"""
        d = self.ctx.diagram
        m = self.ctx.metric
        depth = self.block["depth"]
        rng = np.random.default_rng(self.ctx.run.seed)
        violations = 0
        for _ in range(self.block["samples"]):
            base = random_path(d, depth, rng)
            _, a = sample_pair(d, depth, rng, base=base)
            _, b = sample_pair(d, depth, rng, base=base)
            x, y, z = (complete_periodic(d, path) for path in (base, a, b))
            xy, xz, zy = distance(m, x, y), distance(m, x, z), distance(m, z, y)
            if xy > max(xz, zy) * (1.0 + 1e-12) or xy != distance(m, y, x):
                violations += 1
        return _result(self.block["samples"], violations, "Strong triangle inequality holds")

    def check_telescoping(self) -> CheckResult:
        """alpha^k rho^(k) < rho <= rho^(k) for the regular metric of the same alpha"""
        m = regular_metric(self.ctx.diagram, self.ctx.metric.alpha)
        checked = violations = 0
        for k in self.block["k_values"]:
            for x, y in self._pairs(self.block["samples"]):
                rho = distance(m, x, y)
                rho_k = telescoped_distance(m, x, y, k)
                checked += 1
                if not (m.alpha ** k * rho_k < rho <= rho_k):
                    violations += 1
        return _result(checked, violations, "Telescoped metric brackets the metric",
                       f"k in {self.block['k_values']}")

    def check_abscissa(self) -> CheckResult:
        dim = self.ctx.run.dim
        s0 = abscissa(self.ctx.metric, self.ctx.perron)
        lo, hi = abscissa_numeric(self.ctx.metric, dim["depth"], dim["epsilon"])
        inside = lo - 1e-12 <= s0 <= hi + 1e-12
        return _result(1, 0 if inside else 1, "Numeric abscissa brackets the closed form",
                       f"s0={Utils.format_float(s0)} in [{Utils.format_float(lo)}, {Utils.format_float(hi)}]")

    def check_content(self) -> CheckResult:
        """Hausdorff content at depth D never increases with D"""
        m = self.ctx.metric
        s0 = abscissa(m, self.ctx.perron)
        depth = self.ctx.run.dim["content_depth"]
        checked = violations = 0
        for d in (max(s0 - 0.1, 0.0), s0, s0 + 0.1):
            values = [hausdorff_content_depth(m, d, D) for D in range(depth + 1)]
            for before, after in zip(values, values[1:]):
                checked += 1
                if after > before * (1.0 + 1e-12):
                    violations += 1
        return _result(checked, violations, "Content monotone in depth")

    def check_eigencount(self) -> CheckResult:
        d = self.ctx.diagram
        violations = sum(1 for n in range(self._max_n + 1) if eigen_count(d, n) != count_paths(d, n + 1))
        return _result(self._max_n + 1, violations, "Eigenvalue count matches #Pi_(n+1)")

    def check_lipschitz(self) -> CheckResult:
        m = self.ctx.metric
        try:
            plan = embedding_plan(m, self.ctx.perron)
            k, n, source = plan.k, plan.n, "plan"
        except PlanError as e:
            logger.warning(f"{e.message}; checking the basic dimension instead")
            k, n, source = 1, min_embedding_dim(m.diagram.p, m.alpha), "basic"
        lab = default_labeling(telescope(m.diagram, k) if k > 1 else m.diagram)
        report = lipschitz_distortion_report(
            m, lab, n, self.block["samples"], self.block["depth"], self.ctx.run.seed, k
        )
        return _result(report["samples"], report["violations"], "Lipschitz embedding within its constants",
                       f"{source} k={k}, n={n}; ratios in [{Utils.format_float(report['empirical_min'])}, "
                       f"{Utils.format_float(report['empirical_max'])}]")

    def check_hoelder(self) -> CheckResult:
        m = self.ctx.metric
        lab = default_labeling(m.diagram)
        s = min_hoelder_exponent(lab, m.alpha) + 0.5
        report = hoelder_distortion_report(m, lab, s, self.block["samples"], self.block["depth"],
                                           self.ctx.run.seed)
        result = _result(report["samples"], report["violations"], "Hoelder embedding within its constants",
                         f"s={Utils.format_float(s)}")
        image_depth = self.block["image_depth"]
        if count_paths(m.diagram, image_depth) <= config.enum_cap():
            disjoint = images_disjoint(cylinder_image_intervals(m.diagram, lab, m.alpha, s, image_depth))
            if not disjoint and result["status"] == "success":
                result["status"] = "warning"
                result["message"] = f"Cylinder images at depth {image_depth} overlap"
        return result

    def _spectrum_params(self, beta) -> SpectrumParams:
        ctx = self.ctx
        s = ctx.run.spectrum["s"]
        if s is None:
            s0 = abscissa(ctx.metric, ctx.perron)
            d_tile = float(ctx.metric.tile_dim) if ctx.metric.tile_dim else s0
            s = hoelder_thresholds(d_tile, ctx.diagram.p, ctx.perron.lam)["basic"] + 0.1
        return spectrum_params(ctx.metric, ctx.perron, s, beta)

    def check_tech_condition(self) -> CheckResult:
        ctx = self.ctx
        beta = MeasureBeta(ctx.diagram, ctx.perron)
        s0 = abscissa(ctx.metric, ctx.perron)
        tech = check_tech(ctx.diagram, ctx.perron, beta, tech_grid(s0, ctx.run.spectrum["grid"]))
        result = _result(1, 0 if tech["passed"] else 1, "Tech condition holds",
                         f"edges_simple={tech['edges_simple']}, nu_distinct={tech['nu_distinct']}")
        result["tech"] = tech["passed"]
        return result

    def check_omega(self) -> CheckResult:
        """Hoelder bounds of the omega-spectrum map and seed independence of eigenvalues"""
        ctx = self.ctx
        d = ctx.diagram
        params = self._spectrum_params(MeasureBeta(d, ctx.perron))
        spectrum = ctx.run.spectrum
        report = omega_distortion_report(ctx.metric, params, spectrum["samples"], spectrum["pair_depth"],
                                         ctx.run.seed)
        shifted = SpectrumParams(params.s, params.s0, params.alpha, params.lambda_s, params.beta,
                                 tuple(1.0 for _ in range(d.q)))
        violations = report["violations"]
        checked = report["samples"]
        for n in range(2, self._max_n + 1):
            for path in enumerate_paths(d, n):
                gap = eigenvalue(d, path, shifted).value - eigenvalue(d, path, params).value
                checked += 1
                if abs(gap - params.lambda_s ** len(path.body)) > 1e-12:
                    violations += 1
        result = _result(checked, violations, "Omega-spectrum map within its constants",
                         f"s={Utils.format_float(params.s)}, "
                         f"exponent={Utils.format_float(report['exponent'])}, "
                         f"ratios in [{Utils.format_float(report['empirical_min'])}, "
                         f"{Utils.format_float(report['empirical_max'])}]")
        result["lower_certified"] = report["lower_certified"]
        if not report["lower_certified"] and result["status"] == "success":
            result["status"] = "warning"
            result["message"] = (
                f"Omega-spectrum lower constant is not positive at s={Utils.format_float(params.s)}; "
                "only the upper bound is checked"
            )
        return result

    def _run(self, name: str, check: Callable[[], CheckResult]):
        try:
            self.results["checks"][name] = check()
        except PreconditionError as e:
            # the invariant could not be established: a failed check, not a skip
            logger.error(f"Check {name} failed: {e.message}")
            self.failures[name] = e
            self.results["checks"][name] = {
                "status": "error",
                "message": "Precondition failed",
                "detail": e.message,
                "checked": 0,
                "violations": 0,
                "error_type": type(e).__name__,
            }

    def run_all_checks(self, spectrum: bool = False) -> VerifyReport:
        """Run every invariant check and return the aggregated results"""
        checks = [
            ("perron", self.check_perron),
            ("path_counts", self.check_path_counts),
            ("measure_additivity", self.check_measure_additivity),
            ("total_mass", self.check_total_mass),
            ("ultrametric", self.check_ultrametric),
            ("telescoping", self.check_telescoping),
            ("abscissa", self.check_abscissa),
            ("content", self.check_content),
            ("eigencount", self.check_eigencount),
            ("lipschitz", self.check_lipschitz),
            ("hoelder", self.check_hoelder),
        ]
        if spectrum:
            checks.append(("tech", self.check_tech_condition))
        for name, check in checks:
            logger.info(f"Running check {name}")
            self._run(name, check)
        if spectrum and self.results["checks"]["tech"].get("tech"):
            self._run("omega", self.check_omega)

        statuses = [result["status"] for result in self.results["checks"].values()]
        if "error" in statuses:
            self.results["overall_status"] = "error"
        elif "warning" in statuses:
            self.results["overall_status"] = "warning"
        else:
            self.results["overall_status"] = "success"
        self.results["error_count"] = statuses.count("error")
        self.results["warning_count"] = statuses.count("warning")
        return self.results

    def write(self, out_dir: str):
        """Write verify.json, then fail with the exit code the outcome calls for"""
        Utils.write_json(out_dir, "verify.json", self.results)
        checks = self.results["checks"]
        tech = checks.get("tech")
        if tech is not None and tech["status"] == "error" and "tech" not in self.failures:
            raise TechConditionError(f"tech condition fails: {tech['detail']}")
        if self.failures:
            name, error = next(iter(self.failures.items()))
            raise type(error)(f"check {name}: {error.message}")
        failed = [name for name, result in checks.items() if result["status"] == "error"]
        if failed:
            raise InvariantViolationError(f"invariant violations in: {', '.join(failed)}")
