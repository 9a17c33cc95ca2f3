"""Plaited and nested arc families.

Spiral sine families with closed-form crossing equations, lift-based and
enclosure-based plaiting/nesting classifiers, and a two-contraction
substitution system whose stage curves nest around a Cantor set.
"""

from . import errors
from .geometry import (
    IntersectionRecord,
    Point2,
    Polyline,
    USING_COMPILED,
    enclosing_cycle,
    enclosure_check,
    polyline_intersections,
    segment_intersect,
    self_intersections,
    winding_number,
)
from .verdict import Verdict
from .sinefamily import (
    LiftedArcId,
    Root,
    SineFamilyParams,
    classify_analytic,
    crossing_deltas,
    family_arcs,
    plaiting_threshold,
    sample_gamma,
    solve_lift_intersections,
)
from .classifier import (
    ArcFamily,
    ClassificationReport,
    classify_enclosure,
    classify_lift,
    enclosure_report,
    lift_report,
    local_family,
)
from .substitution import (
    Contraction,
    Slot,
    StageCurve,
    SubstitutionSystem,
    builtin_system,
)
from .render import SceneSpec, parse_svg_paths, render_svg
from .verification import run_suite

__version__ = "0.1.0"

__all__ = [
    "errors",
    "IntersectionRecord",
    "Point2",
    "Polyline",
    "USING_COMPILED",
    "enclosing_cycle",
    "enclosure_check",
    "polyline_intersections",
    "segment_intersect",
    "self_intersections",
    "winding_number",
    "Verdict",
    "LiftedArcId",
    "Root",
    "SineFamilyParams",
    "classify_analytic",
    "crossing_deltas",
    "family_arcs",
    "plaiting_threshold",
    "sample_gamma",
    "solve_lift_intersections",
    "ArcFamily",
    "ClassificationReport",
    "classify_enclosure",
    "classify_lift",
    "enclosure_report",
    "lift_report",
    "local_family",
    "Contraction",
    "Slot",
    "StageCurve",
    "SubstitutionSystem",
    "builtin_system",
    "SceneSpec",
    "parse_svg_paths",
    "render_svg",
    "run_suite",
    "__version__",
]
