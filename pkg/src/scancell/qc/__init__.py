"""Calibration-target rendering and scan quality-control analysis."""

from .analyze import (
    CalibrationReport,
    ScaleMeasurement,
    analyze_target,
    crop_to_border,
    find_print_box,
    is_monotone,
    measure_scale_px,
    smallest_resolvable_um,
    wedge_tones,
)
from .raster import GrayRaster
from .target import (
    CalibrationGeometry,
    Distortions,
    ResolutionGroup,
    TargetLayout,
    default_geometry,
    render_print_scan,
    render_target,
    wedge_level,
)

__all__ = [
    "CalibrationReport",
    "ScaleMeasurement",
    "analyze_target",
    "crop_to_border",
    "find_print_box",
    "is_monotone",
    "measure_scale_px",
    "smallest_resolvable_um",
    "wedge_tones",
    "GrayRaster",
    "CalibrationGeometry",
    "Distortions",
    "ResolutionGroup",
    "TargetLayout",
    "default_geometry",
    "render_print_scan",
    "render_target",
    "wedge_level",
]
