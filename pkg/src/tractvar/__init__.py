"""Relative vocal-tract variables from midsagittal pellet trajectories."""

from .errors import (
    AnatomyInconsistent,
    CollinearPoints,
    ConfigError,
    DataError,
    DegenerateAngle,
    DegenerateFit,
    DegenerateTrace,
    InsufficientData,
    LengthMismatch,
    NoIntersection,
    ParseError,
    SchemaError,
    TimebaseMismatch,
    TractvarError,
    ZeroVariance,
)
from .anatomy import (
    Sex,
    SpeakerAnatomy,
    build_speaker_anatomy,
    extend_palate,
    infer_anterior_wall,
    palatal_reference_center,
)
from .compare import ComparisonReport, compare_tvs, ppmc
from .geometry import (
    Circle,
    ClearanceResult,
    Point2D,
    Polyline,
    angle_from_reference,
    circle_polyline_clearance,
    circumcircle,
    distance,
    extend_line_to_polyline,
    fit_circle,
    point_polyline_clearance,
    point_segment_distance,
)
from .ingest import (
    IngestReport,
    PelletTrajectory,
    load_manifest,
    parse_pellet_file,
    parse_trace_file,
    resample,
    write_pellet_file,
)
from .pipeline import RunConfig, run_pipeline
from .tract_variables import (
    PelletFrame,
    Quality,
    TractVariableFrame,
    TvOptions,
    TvTrajectory,
    compute_frame,
    compute_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "AnatomyInconsistent",
    "Circle",
    "ClearanceResult",
    "CollinearPoints",
    "ComparisonReport",
    "ConfigError",
    "DataError",
    "DegenerateAngle",
    "DegenerateFit",
    "DegenerateTrace",
    "IngestReport",
    "InsufficientData",
    "LengthMismatch",
    "NoIntersection",
    "ParseError",
    "PelletFrame",
    "PelletTrajectory",
    "Point2D",
    "Polyline",
    "Quality",
    "RunConfig",
    "SchemaError",
    "Sex",
    "SpeakerAnatomy",
    "TimebaseMismatch",
    "TractVariableFrame",
    "TractvarError",
    "TvOptions",
    "TvTrajectory",
    "ZeroVariance",
    "angle_from_reference",
    "build_speaker_anatomy",
    "circle_polyline_clearance",
    "circumcircle",
    "compare_tvs",
    "compute_frame",
    "compute_trajectory",
    "distance",
    "extend_line_to_polyline",
    "extend_palate",
    "fit_circle",
    "infer_anterior_wall",
    "load_manifest",
    "palatal_reference_center",
    "parse_pellet_file",
    "parse_trace_file",
    "point_polyline_clearance",
    "point_segment_distance",
    "ppmc",
    "resample",
    "run_pipeline",
    "write_pellet_file",
    "__version__",
]
