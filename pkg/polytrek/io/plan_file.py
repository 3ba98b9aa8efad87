from __future__ import annotations

import json
from pathlib import Path

from pydantic import ValidationError

from ..errors import FileFormatError
from ..geometry import Configuration
from ..motion import MotionKind, MotionPlan, PlanSegment
from ..value_object import ValueObject

PLAN_SCHEMA_VERSION = 1


class WaypointRecord(ValueObject):
    p: list[float]
    rot_index: int
    segment: int
    "Index of the segment that reaches this waypoint."

    kind: MotionKind


class PlanDocument(ValueObject):
    schema_version: int = PLAN_SCHEMA_VERSION
    dim: int
    cost: float
    waypoints: list[WaypointRecord] = []


def format_plan(motion: MotionPlan, dim: int) -> str:
    records = [
        WaypointRecord(p=w.q.p.tolist(), rot_index=w.q.rot_index, segment=w.segment, kind=w.kind)
        for w in motion.waypoints()
    ]
    document = PlanDocument(dim=dim, cost=motion.cost, waypoints=records)
    return json.dumps(document.model_dump(mode="json"), indent=2) + "\n"


def parse_plan(text: str) -> MotionPlan:
    """
    Rebuild the segments from the flat waypoint list: each segment starts at the last waypoint of the one before.

    Raises:
        FileFormatError: The text is not a plan document.
    """

    try:
        document = PlanDocument.model_validate_json(text)
    except ValidationError as error:
        raise FileFormatError(f"invalid plan file: {error}") from error
    if document.schema_version != PLAN_SCHEMA_VERSION:
        raise FileFormatError(f"unsupported plan schema version {document.schema_version}")

    segments: list[PlanSegment] = []
    groups: dict[int, list[WaypointRecord]] = {}
    for record in document.waypoints:
        groups.setdefault(record.segment, []).append(record)
    for index in sorted(groups):
        records = groups[index]
        waypoints = [Configuration(p=r.p, rot_index=r.rot_index) for r in records]
        if segments:
            waypoints.insert(0, segments[-1].end)
        segments.append(PlanSegment(kind=records[0].kind, waypoints=tuple(waypoints)))
    try:
        return MotionPlan.from_segments(segments)
    except ValidationError as error:
        raise FileFormatError(f"inconsistent plan file: {error}") from error


def save_plan(motion: MotionPlan, dim: int, path: Path) -> None:
    Path(path).write_text(format_plan(motion, dim))


def load_plan(path: Path) -> MotionPlan:
    return parse_plan(Path(path).read_text())
