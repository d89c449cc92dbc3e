"""Post-flight triage for 360-degree reconnaissance footage.

Scores frame sharpness, filters blur with a sliding-window threshold,
reduces the survivors to keyframes, and turns SfM camera poses into a
navigable panorama tour plus a sparse point cloud export.
"""

from .blur import (
    BlurSeries,
    FilterReport,
    FilterVerdict,
    FrameRecord,
    classify,
    compute_thresholds,
    filter_frames,
)
from .config import PipelineConfig, load_config, resolve_config
from .exceptions import TriageError
from .imaging import load_gray, to_grayscale, variance_of_laplacian
from .keyframes import KeyframePolicy, select_keyframes
from .sfm import Reconstruction, Shot, export_ply, parse_reconstruction, serialize_reconstruction
from .tour import TourGraph, build_graph, emit_tour, parse_tour

__version__ = "0.1.0"

__all__ = [
    "BlurSeries",
    "FilterReport",
    "FilterVerdict",
    "FrameRecord",
    "KeyframePolicy",
    "PipelineConfig",
    "Reconstruction",
    "Shot",
    "TourGraph",
    "TriageError",
    "build_graph",
    "classify",
    "compute_thresholds",
    "emit_tour",
    "export_ply",
    "filter_frames",
    "load_config",
    "load_gray",
    "parse_reconstruction",
    "parse_tour",
    "resolve_config",
    "select_keyframes",
    "serialize_reconstruction",
    "to_grayscale",
    "variance_of_laplacian",
    "__version__",
]
