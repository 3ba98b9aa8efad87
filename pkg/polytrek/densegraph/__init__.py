from .dense_graph import (
    BuildStats,
    DenseGraph,
    TraversalEdge,
    build_dense_graph,
    build_patches,
    candidate_pairs,
    free_configuration_count,
)
from .fast_path import fast_verify_n0, single_step_pairs
from .grid import DEFAULT_SITES, BoundaryGrid, discretize_boundary
from .patches import ConfigPatch, PatchId, bloat_distance, free_configurations, group_patches
from .traversal import (
    BuildParams,
    TraversalModel,
    TraversalProblem,
    TraversalResult,
    TraversalStatus,
    build_traversal_model,
    decode_traversal,
    provably_infeasible,
    verify_traversal,
)

__all__ = [
    "DEFAULT_SITES",
    "BoundaryGrid",
    "BuildParams",
    "BuildStats",
    "ConfigPatch",
    "DenseGraph",
    "PatchId",
    "TraversalEdge",
    "TraversalModel",
    "TraversalProblem",
    "TraversalResult",
    "TraversalStatus",
    "bloat_distance",
    "build_dense_graph",
    "build_patches",
    "build_traversal_model",
    "candidate_pairs",
    "decode_traversal",
    "discretize_boundary",
    "fast_verify_n0",
    "free_configuration_count",
    "free_configurations",
    "group_patches",
    "provably_infeasible",
    "single_step_pairs",
    "verify_traversal",
]
