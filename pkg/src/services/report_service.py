"""
Report Service Module
Builds the diagram, Perron data and metric of a run and turns the core
operations into the JSON/CSV artifacts of info, dim, embed and spectrum.
"""

import logging
from typing import Any, Dict, List, NamedTuple, Optional

from .. import config
from ..config import RunConfig
from ..core import (
    MeasureBeta,
    TableBeta,
    check_cantor,
    check_tech,
    count_paths,
    cylinder_image_intervals,
    default_labeling,
    diagram_from_json,
    diagram_to_json,
    dimension_report,
    eigen_table,
    embed_point_cloud,
    embedding_plan,
    from_substitution,
    hoelder_distortion_report,
    hoelder_thresholds,
    images_disjoint,
    is_bounded,
    is_primitive,
    labeling_from_json,
    labeling_threshold,
    lipschitz_distortion_report,
    metric_from_config,
    metric_to_json,
    omega_distortion_report,
    omega_spectrum,
    path_word,
    perron,
    seeds_from_json,
    spectrum_params,
    substitution_from_json,
    tech_grid,
    telescope,
)
from ..core.base import EdgeLabeling, PerronData, SelfSimilarMetric, StationaryDiagram
from ..helpers.errors import (
    ConfigError,
    DegenerateDiagramError,
    NotPrimitiveError,
    PreconditionError,
    TechConditionError,
)
from ..helpers.utils import Utils
from ..types.schemas import InfoReport, PlanReport, SpectrumReport

logger = logging.getLogger(__name__)

EIGEN_HEADER = ["word", "depth", "eigenvalue", "multiplicity"]
OMEGA_HEADER = ["value", "tail_bound"]


class RunContext(NamedTuple):
    """Everything a command needs: the validated config and the objects built from it"""

    run: RunConfig
    diagram: StationaryDiagram
    perron: Optional[PerronData]
    metric: Optional[SelfSimilarMetric]
    primitive_witness: Optional[int]


def perron_to_json(data: Optional[PerronData]) -> Optional[Dict[str, Any]]:
    if data is None:
        return None
    return {"lambda": data.lam, "nu": list(data.nu), "residual": data.residual, "iterations": data.iterations}


def plan_to_json(plan) -> PlanReport:
    return {"k": plan.k, "n": plan.n, "basic_n": plan.basic_n, "p_k": plan.p_k, "inequality": list(plan.inequality)}


class ReportService:
    """Service orchestrating the core modules into command reports"""

    def build_context(self, run: RunConfig, strict: bool = True) -> RunContext:
        """Build diagram, Perron data and metric.

        With strict=False a non-primitive diagram or a metric that cannot be
        built leaves the corresponding field None instead of failing.
        """
        if run.source == "substitution":
            diagram = from_substitution(substitution_from_json(run.source_block), run.name)
        else:
            diagram = diagram_from_json(run.source_block, run.name)
        logger.info(f"Built diagram {diagram.name}: {diagram.q} vertices, {diagram.p} edges")

        primitive, witness = is_primitive(diagram)
        data = None
        if primitive:
            data = perron(diagram)
        elif strict and run.metric.get("mode") in ("substitution", "tiling"):
            raise NotPrimitiveError(f"adjacency of {diagram.name} is not primitive")

        try:
            metric = metric_from_config(diagram, run.metric, data)
        except PreconditionError as e:
            if strict:
                raise
            logger.warning(f"Metric unavailable: {e.message}")
            metric = None
        return RunContext(run, diagram, data, metric, witness)

    def _require_perron(self, ctx: RunContext) -> PerronData:
        if ctx.perron is None:
            raise NotPrimitiveError(f"adjacency of {ctx.diagram.name} is not primitive; Perron data unavailable")
        return ctx.perron

    def _require_metric(self, ctx: RunContext) -> SelfSimilarMetric:
        if ctx.metric is None:
            raise PreconditionError("no metric could be built for this diagram")
        return ctx.metric

    def info(self, ctx: RunContext, out_dir: str) -> InfoReport:
        """Write info.json and diagram.json; a non-Cantor path space fails after writing"""
        d = ctx.diagram
        verdict = check_cantor(d, d.q * d.q + 1)
        cantor = verdict.hypothesis_ok and verdict.perfect
        report: InfoReport = {
            "name": d.name,
            "vertices": [v.label for v in d.vertices],
            "edge_count": d.p,
            "adjacency": [list(row) for row in d.adjacency],
            "primitive": ctx.primitive_witness is not None,
            "primitive_witness": ctx.primitive_witness,
            "perron": perron_to_json(ctx.perron),
            "cantor": {"hypothesis_ok": verdict.hypothesis_ok, "perfect": verdict.perfect, "cantor": cantor},
            "metric": metric_to_json(ctx.metric) if ctx.metric else None,
            "path_counts": [count_paths(d, n) for n in range(0, 9)],
        }
        Utils.write_json(out_dir, "info.json", report)
        Utils.write_json(out_dir, "diagram.json", diagram_to_json(d))
        if not cantor:
            logger.error(f"{d.name}: path space is not a Cantor set")
            raise DegenerateDiagramError(
                f"path space of {d.name} is not a Cantor set "
                f"(hypothesis_ok={verdict.hypothesis_ok}, perfect={verdict.perfect})"
            )
        return report

    def dim(self, ctx: RunContext, out_dir: str) -> Dict[str, Any]:
        block = ctx.run.dim
        report = dimension_report(
            self._require_metric(ctx),
            self._require_perron(ctx),
            block["depth"],
            block["epsilon"],
            block["content_depth"],
        )
        Utils.write_json(out_dir, "dim.json", report)
        return report

    def _labeling(self, d: StationaryDiagram, raw: Any) -> EdgeLabeling:
        if raw is None:
            return default_labeling(d)
        if isinstance(raw, str):
            raw = Utils.read_json_file(raw, "labels")
        return labeling_from_json(d, raw)

    def embed(self, ctx: RunContext, out_dir: str) -> Dict[str, Any]:
        """Point cloud CSV and distortion report for the Lipschitz and/or Hoelder maps"""
        block = ctx.run.embed
        n, s, use_plan = block["n"], block["s"], bool(block["plan"])
        if n is None and s is None and not use_plan:
            raise ConfigError("embed: give --n, --s or --plan")
        m = self._require_metric(ctx)
        d = ctx.diagram
        seed = ctx.run.seed
        samples, depth = block["samples"], block["depth"]

        report: Dict[str, Any] = {"plan": None, "lipschitz": None, "hoelder": None, "images_disjoint": None}
        columns: List[List[Any]] = []
        header = ["word"]

        k = 1
        if use_plan or n is not None:
            if use_plan:
                plan = embedding_plan(m, self._require_perron(ctx))
                report["plan"] = plan_to_json(plan)
                k, n = plan.k, plan.n
            dk = telescope(d, k) if k > 1 else d
            lab = self._labeling(dk, block["labels"])
            report["lipschitz"] = lipschitz_distortion_report(m, lab, n, samples, depth, seed, k)
            columns.append(embed_point_cloud(m, lab, samples, depth, seed, n=n, k=k))
            header += [f"x{i}" for i in range(1, n + 1)]

        if s is not None:
            # labels given with a plan name telescoped edges
            lab = self._labeling(d, block["labels"] if k == 1 else None)
            report["hoelder"] = hoelder_distortion_report(m, lab, s, samples, depth, seed)
            image_depth = ctx.run.verify["image_depth"]
            if count_paths(d, image_depth) <= config.enum_cap():
                report["images_disjoint"] = images_disjoint(
                    cylinder_image_intervals(d, lab, m.alpha, s, image_depth)
                )
            columns.append(embed_point_cloud(m, lab, samples, depth, seed, s=s))
            header.append("phi_s")

        rows = []
        for parts in zip(*columns):
            row = list(parts[0])
            for extra in parts[1:]:
                # same seed, same sampled points
                row.extend(extra[1:])
            rows.append(row)
        Utils.write_csv(out_dir, "embed_points.csv", header, rows)
        Utils.write_json(out_dir, "embed_report.json", report)
        return report

    def _beta(self, ctx: RunContext, data: PerronData):
        beta_file = ctx.run.spectrum["beta_file"]
        if beta_file:
            return TableBeta.from_json(ctx.diagram, Utils.read_json_file(beta_file, "beta"))
        return MeasureBeta(ctx.diagram, data)

    def spectrum(self, ctx: RunContext, out_dir: str) -> SpectrumReport:
        """Eigenvalue table, omega-spectrum and tech check; a failed tech check fails after writing"""
        block = ctx.run.spectrum
        s = block["s"]
        if s is None:
            raise ConfigError("spectrum: --s is required")
        d = ctx.diagram
        data = self._require_perron(ctx)
        m = self._require_metric(ctx)
        beta = self._beta(ctx, data)
        seeds = ()
        if block["seeds_file"]:
            seeds = seeds_from_json(d, Utils.read_json_file(block["seeds_file"], "seeds"))
        params = spectrum_params(m, data, s, beta, seeds)
        bounded = is_bounded(s, params.s0)

        tech = check_tech(d, data, beta, tech_grid(params.s0, block["grid"]))
        # the tile dimension equals s0 for tiling metrics
        d_tile = float(m.tile_dim) if m.tile_dim else params.s0
        thresholds = hoelder_thresholds(d_tile, d.p, data.lam, tech["s1_estimate"])
        thresholds["labeling"] = labeling_threshold(d_tile, beta, s, d, data.lam)

        records = eigen_table(d, params, block["depth"])
        Utils.write_csv(
            out_dir, "eigenvalues.csv", EIGEN_HEADER,
            ([path_word(d, r.path), r.path.depth, r.value, r.multiplicity] for r in records),
        )

        report: SpectrumReport = {
            "s": s,
            "s0": params.s0,
            "lambda_s": params.lambda_s,
            "bounded": bounded,
            "depth": block["depth"],
            "mode": block["mode"],
            "eigenvalue_count": len(records),
            "tech": tech,
            "thresholds": thresholds,
            "distortion": None,
        }
        points = []
        if bounded:
            points = omega_spectrum(d, params, block["depth"], block["mode"], block["budget"], ctx.run.seed)
            report["omega_count"] = len(points)
            report["omega_min"] = points[0][0]
            report["omega_max"] = points[-1][0]
            if tech["passed"]:
                report["distortion"] = omega_distortion_report(
                    m, params, block["samples"], block["pair_depth"], ctx.run.seed
                )
        else:
            logger.warning(f"s={s} is in the unbounded regime; omega-spectrum skipped")
        Utils.write_csv(out_dir, "omega.csv", OMEGA_HEADER, points)
        Utils.write_json(out_dir, "spectrum_report.json", report)

        if not tech["passed"]:
            logger.error("Tech condition fails; the omega-spectrum map is not certified injective")
            raise TechConditionError(
                f"tech condition fails for {d.name}: edges_simple={tech['edges_simple']}, "
                f"nu_distinct={tech['nu_distinct']}"
            )
        return report


report_service = ReportService()
