from .coarse_graph import CoarseGraph, construct_coarse_graph
from .coverage import CoverageTracker, check_coverage, sample_visibility_edge
from .decompose import DecomposeParams, decompose
from .inflate import InflationParams, closest_point, inflate_region, separating_planes
from .visibility import VisibilityGraph, sample_visibility_graph

__all__ = [
    "CoarseGraph",
    "CoverageTracker",
    "DecomposeParams",
    "InflationParams",
    "VisibilityGraph",
    "check_coverage",
    "closest_point",
    "construct_coarse_graph",
    "decompose",
    "inflate_region",
    "sample_visibility_edge",
    "sample_visibility_graph",
    "separating_planes",
]
