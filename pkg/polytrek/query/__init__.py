from .attach import Attachment, QueryParams, connect_query, query_contexts
from .plan import intra_patch_walk, plan, rotation_step_cost
from .planner import Planner

__all__ = [
    "Attachment",
    "Planner",
    "QueryParams",
    "connect_query",
    "intra_patch_walk",
    "plan",
    "query_contexts",
    "rotation_step_cost",
]
