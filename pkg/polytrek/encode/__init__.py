from .constraints import DEFAULT_DIVISIONS, SegmentBlock, segment_constraints, segment_constraints_hold
from .expr import AffinePoint, LinearExpr, PoseExpr, lerp
from .reachable import (
    ArcApproxParams,
    SegmentKind,
    SegmentSet,
    SweptSurface,
    apex_matrix,
    chord_scale,
    reachable_boundary_2d,
    reachable_boundary_3d,
    static_segments,
    sweep_segments,
)
from .union import check_quad_in_union, check_segment_in_union, check_triangle_in_union, segments_in_union

__all__ = [
    "DEFAULT_DIVISIONS",
    "AffinePoint",
    "ArcApproxParams",
    "LinearExpr",
    "PoseExpr",
    "SegmentBlock",
    "SegmentKind",
    "SegmentSet",
    "SweptSurface",
    "apex_matrix",
    "check_quad_in_union",
    "check_segment_in_union",
    "check_triangle_in_union",
    "chord_scale",
    "lerp",
    "reachable_boundary_2d",
    "reachable_boundary_3d",
    "segment_constraints",
    "segment_constraints_hold",
    "segments_in_union",
    "static_segments",
    "sweep_segments",
]
