from __future__ import annotations

import logging
import time
from typing_extensions import Optional

from ..decompose import CoarseGraph
from ..densegraph import DenseGraph
from ..geometry import Configuration, RigidObject
from ..motion import MotionPlan
from ..roadmap import Roadmap
from ..settings import resolve_eps
from .attach import QueryParams
from .plan import plan

logger = logging.getLogger(__name__)


class Planner:
    """
    Answers repeated queries for one object over a built roadmap. `last_elapsed_ms` holds the wall time of the most
    recent query, attachment and search included.

    Example:
        ```
        planner = Planner.from_roadmap(roadmap, RigidObject.stick())
        motion = planner.plan(q_start, q_goal)
        print(planner.last_elapsed_ms, len(motion.waypoints()))
        ```
    """

    def __init__(
        self, coarse: CoarseGraph, dense: DenseGraph, params: QueryParams = QueryParams(), eps: Optional[float] = None
    ):
        self.coarse = coarse
        self.dense = dense
        self.params = params
        self.eps = resolve_eps(eps)
        self.last_elapsed_ms: Optional[float] = None

    @classmethod
    def from_roadmap(
        cls, roadmap: Roadmap, obj: RigidObject, params: QueryParams = QueryParams(), eps: Optional[float] = None
    ) -> Planner:
        return cls(roadmap.coarse, roadmap.dense_for(obj), params, eps)

    @property
    def obj(self) -> RigidObject:
        return self.dense.obj

    def plan(self, q_start: Configuration, q_end: Configuration) -> MotionPlan:
        started = time.perf_counter()
        try:
            return plan(self.coarse, self.dense, q_start, q_end, self.params, self.eps)
        finally:
            self.last_elapsed_ms = (time.perf_counter() - started) * 1e3
            logger.info("query answered in %.1f ms", self.last_elapsed_ms)
