from __future__ import annotations

from enum import Enum

import numpy as np
from pydantic import Field, model_validator

from .geometry import Configuration
from .value_object import ValueObject


class MotionKind(str, Enum):
    INTER_VERTEX = "inter"
    "A certified traversal between two dense-graph vertices (attachments included)."

    INTRA_VERTEX = "intra"
    "A walk along adjacent configurations inside one patch."


class PlanSegment(ValueObject):
    kind: MotionKind
    waypoints: tuple[Configuration, ...] = Field(min_length=1)

    @property
    def cost(self) -> float:
        return translation_cost(self.waypoints)

    @property
    def start(self) -> Configuration:
        return self.waypoints[0]

    @property
    def end(self) -> Configuration:
        return self.waypoints[-1]


class PlanWaypoint(ValueObject):
    q: Configuration
    kind: MotionKind
    segment: int


class MotionPlan(ValueObject):
    """
    A full motion: segments alternating between traversals and intra-patch walks, each starting exactly where the
    previous one ends. `cost` is the total translation 1-norm.
    """

    segments: tuple[PlanSegment, ...] = ()
    cost: float = 0.0

    @model_validator(mode="after")
    def _check_plan(self) -> MotionPlan:
        for k in range(len(self.segments) - 1):
            if self.segments[k].end != self.segments[k + 1].start:
                raise ValueError(f"segments {k} and {k + 1} do not meet")
        total = sum(segment.cost for segment in self.segments)
        if abs(total - self.cost) > 1e-9:
            raise ValueError(f"plan cost {self.cost} differs from its segment total {total}")
        return self

    @classmethod
    def from_segments(cls, segments: list[PlanSegment]) -> MotionPlan:
        return cls(segments=tuple(segments), cost=sum(segment.cost for segment in segments))

    @property
    def is_empty(self) -> bool:
        return not self.segments

    def waypoints(self) -> list[PlanWaypoint]:
        """Every configuration in order, junctions listed once, tagged with the segment that reaches it."""

        flat: list[PlanWaypoint] = []
        for index, segment in enumerate(self.segments):
            items = segment.waypoints if index == 0 else segment.waypoints[1:]
            flat.extend(PlanWaypoint(q=q, kind=segment.kind, segment=index) for q in items)
        return flat


def translation_cost(waypoints: tuple[Configuration, ...]) -> float:
    return float(sum(np.abs(b.p - a.p).sum() for a, b in zip(waypoints, waypoints[1:])))
