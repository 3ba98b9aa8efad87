from .boundary import BoundaryRing, Facet, boundary_ring_2d, facets_3d
from .polytope import (
    ConvexPolytope,
    chebyshev_center,
    contains_point,
    contains_points,
    intersect,
    segment_hits_polytope,
    segment_parameter_interval,
    segments_hit_polytope,
)
from .rigid_object import Configuration, ObjectFingerprint, RigidObject, posed_points, transform_object
from .rotation import RotationTable, rotation_2d, wrap_angle
from .scene import Scene, SceneFingerprint

__all__ = [
    "BoundaryRing",
    "Configuration",
    "ConvexPolytope",
    "Facet",
    "ObjectFingerprint",
    "RigidObject",
    "RotationTable",
    "Scene",
    "SceneFingerprint",
    "boundary_ring_2d",
    "chebyshev_center",
    "contains_point",
    "contains_points",
    "facets_3d",
    "intersect",
    "posed_points",
    "rotation_2d",
    "segment_hits_polytope",
    "segment_parameter_interval",
    "segments_hit_polytope",
    "transform_object",
    "wrap_angle",
]
