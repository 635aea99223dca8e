"""
Core mathematics of cantorlab: diagrams, Perron data, ultrametrics,
dimension, embeddings and the path-space Laplacian.
"""

from .base import (
    ROOT,
    BetaFunction,
    Edge,
    EdgeLabeling,
    EigenRecord,
    EmbeddingPlan,
    FinitePath,
    Measure,
    PathSpec,
    PerronData,
    SelfSimilarMetric,
    SpectrumParams,
    StationaryDiagram,
    Substitution,
    Vertex,
)
from .diagram import (
    CantorVerdict,
    PrefixResult,
    canonical_spec,
    check_cantor,
    common_prefix,
    complete_periodic,
    count_paths,
    diagram_from_adjacency,
    diagram_from_json,
    diagram_to_json,
    edge_count,
    enumerate_paths,
    extensions,
    from_substitution,
    is_primitive,
    make_spec,
    path_counts,
    path_word,
    sample_pair,
    sample_path,
    spec_word,
    substitution_from_json,
    telescope,
    to_telescoped,
    validate_path,
)
from .dimension import (
    abscissa,
    abscissa_numeric,
    content_curve,
    dimension_report,
    hausdorff_content_depth,
    hausdorff_dimension,
    level_sums,
    zeta_partial,
)
from .embed import (
    cylinder_image_intervals,
    default_labeling,
    distortion_report,
    embed_point_cloud,
    embedding_plan,
    hoelder_constants,
    hoelder_distortion_report,
    hoelder_embed,
    images_disjoint,
    labeling_from_json,
    lipschitz_constants,
    lipschitz_distortion_report,
    lipschitz_embed,
    min_embedding_dim,
    min_hoelder_exponent,
    series_gap,
)
from .laplacian import (
    MeasureBeta,
    TableBeta,
    check_tech,
    default_beta,
    eigen_count,
    eigen_table,
    eigenvalue,
    hoelder_thresholds,
    is_bounded,
    labeling_threshold,
    lambda_s,
    omega_distortion_report,
    omega_point,
    omega_spectrum,
    seeds_from_json,
    spectrum_params,
    tech_grid,
)
from .metric import (
    cylinder_diameter,
    distance,
    metric_from_config,
    metric_to_json,
    regular_metric,
    regularize_bounds,
    scaled_metric,
    substitution_metric,
    telescoped_distance,
    tiling_metric,
)
from .perron import cylinder_mass_total, measure, perron

__all__ = [name for name in dir() if not name.startswith("_")]
