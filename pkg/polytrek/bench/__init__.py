from .complexity import constraint_growth, count_traversal_problems, two_box_cover
from .fixtures import (
    OBJECTS,
    SCENES,
    Fixture,
    bugtrap,
    corner,
    fixture,
    fixture_object,
    l_object,
    pad,
    peg,
    slab,
    stick,
)
from .prm import PrmParams, PrmRoadmap, check_count, edge_free, poses_free, prm_build, prm_query
from .validate import ValidationReport, body_samples, interpolate_poses, validate_motion, validate_path, validate_poses

__all__ = [
    "OBJECTS",
    "SCENES",
    "Fixture",
    "PrmParams",
    "PrmRoadmap",
    "ValidationReport",
    "body_samples",
    "bugtrap",
    "check_count",
    "constraint_growth",
    "corner",
    "count_traversal_problems",
    "edge_free",
    "fixture",
    "fixture_object",
    "interpolate_poses",
    "l_object",
    "pad",
    "peg",
    "poses_free",
    "prm_build",
    "prm_query",
    "slab",
    "stick",
    "two_box_cover",
    "validate_motion",
    "validate_path",
    "validate_poses",
]
