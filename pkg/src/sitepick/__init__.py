"""Reliability-weighted clustering of survey locations into recommended sites."""

__version__ = "0.1.0"

from .clustering import (
    ClusterAssignment,
    ClusteringResult,
    DistanceMetric,
    HaversineMetric,
    PlanarMetric,
    kmeans,
    kmeanspp_init,
    objective,
    weighted_center,
)
from .errors import (
    ConfigError,
    DegenerateClusteringError,
    EmptyClusterError,
    ParseError,
    SitepickError,
    SweepError,
    ValidationError,
)
from .geo import (
    EARTH,
    EarthModel,
    GeoPoint,
    coords_array,
    from_degrees,
    haversine,
    haversine_km,
    to_degrees,
)
from .io_pipeline import (
    ParseResult,
    Quadrant,
    QuadrantSummary,
    RowDiagnostic,
    RunManifest,
    SurveyResponse,
    build_weighted_points,
    export_dunn_curve,
    export_geojson,
    export_site_table,
    parse_responses,
    sha256_digest,
    source_points,
)
from .model_selection import DunnScore, KBest, SweepResult, default_k_max, dunn_index, sweep
from .rng import SplitMix64, derive_seed, mix64
from .sites import (
    DEFAULT_REGION_ORDER,
    Representative,
    SiteRecord,
    SiteReport,
    SourcePoint,
    assign_site_ids,
    select_representatives,
)
from .weighting import (
    FrequencyCategory,
    WeightedPoint,
    frequency_weight,
    reliability_auc,
    reliability_weight,
    reliability_weights,
)

__all__ = [
    "__version__",
    "ClusterAssignment",
    "ClusteringResult",
    "ConfigError",
    "DEFAULT_REGION_ORDER",
    "DegenerateClusteringError",
    "DistanceMetric",
    "DunnScore",
    "EARTH",
    "EarthModel",
    "EmptyClusterError",
    "FrequencyCategory",
    "GeoPoint",
    "HaversineMetric",
    "KBest",
    "ParseError",
    "ParseResult",
    "PlanarMetric",
    "Quadrant",
    "QuadrantSummary",
    "Representative",
    "RowDiagnostic",
    "RunManifest",
    "SiteRecord",
    "SiteReport",
    "SitepickError",
    "SourcePoint",
    "SplitMix64",
    "SurveyResponse",
    "SweepError",
    "SweepResult",
    "ValidationError",
    "WeightedPoint",
    "assign_site_ids",
    "build_weighted_points",
    "coords_array",
    "default_k_max",
    "derive_seed",
    "dunn_index",
    "export_dunn_curve",
    "export_geojson",
    "export_site_table",
    "from_degrees",
    "frequency_weight",
    "haversine",
    "haversine_km",
    "kmeans",
    "kmeanspp_init",
    "mix64",
    "objective",
    "parse_responses",
    "reliability_auc",
    "reliability_weight",
    "reliability_weights",
    "select_representatives",
    "sha256_digest",
    "source_points",
    "sweep",
    "to_degrees",
    "weighted_center",
]
