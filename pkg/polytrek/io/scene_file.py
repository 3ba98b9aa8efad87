from __future__ import annotations

import json
import logging
from pathlib import Path
from typing_extensions import Annotated, Literal, Union

import numpy as np
from pydantic import Field, ValidationError

from ..errors import SceneParseError
from ..geometry import ConvexPolytope, Scene
from ..value_object import ValueObject

logger = logging.getLogger(__name__)

SCENE_SCHEMA_VERSION = 1


class Bounds(ValueObject):
    lo: list[float]
    hi: list[float]


class BoxObstacle(ValueObject):
    type: Literal["box"] = "box"
    lo: list[float]
    hi: list[float]


class HullObstacle(ValueObject):
    type: Literal["hull"] = "hull"
    points: list[list[float]]


class HalfspaceObstacle(ValueObject):
    type: Literal["halfspaces"] = "halfspaces"
    A: list[list[float]]
    b: list[float]


class LPolygonObstacle(ValueObject):
    """An axis-aligned L-shaped polygon given by its six corners; it is stored as two boxes."""

    type: Literal["l_polygon"] = "l_polygon"
    points: list[list[float]] = Field(min_length=6, max_length=6)


Obstacle = Annotated[
    Union[BoxObstacle, HullObstacle, HalfspaceObstacle, LPolygonObstacle], Field(discriminator="type")
]


class SceneDocument(ValueObject):
    schema_version: int = SCENE_SCHEMA_VERSION
    dim: Literal[2, 3]
    bounds: Bounds
    obstacles: list[Obstacle] = []


def split_l_polygon(points: np.ndarray) -> list[ConvexPolytope]:
    """
    Two boxes whose union is the axis-aligned L polygon with corners `points`: the full-width band on the side away
    from the missing corner, and the remaining leg.
    """

    lo, hi = points.min(axis=0), points.max(axis=0)
    inner = [p for p in points if lo[0] < p[0] < hi[0] and lo[1] < p[1] < hi[1]]
    corners = {(x, y) for x in (lo[0], hi[0]) for y in (lo[1], hi[1])}
    missing = corners - {(float(p[0]), float(p[1])) for p in points}
    if len(inner) != 1 or len(missing) != 1:
        raise ValueError("l_polygon corners do not form an axis-aligned L")
    (rx, ry), (cx, cy) = inner[0], missing.pop()
    if cy == hi[1]:
        band = ([lo[0], lo[1]], [hi[0], ry])
        leg_y = (ry, hi[1])
    else:
        band = ([lo[0], ry], [hi[0], hi[1]])
        leg_y = (lo[1], ry)
    leg_x = (lo[0], rx) if cx == hi[0] else (rx, hi[0])
    leg = ([leg_x[0], leg_y[0]], [leg_x[1], leg_y[1]])
    return [ConvexPolytope.from_box(*band), ConvexPolytope.from_box(*leg)]


def _obstacles(spec: Obstacle, dim: int) -> list[ConvexPolytope]:
    if isinstance(spec, BoxObstacle):
        return [ConvexPolytope.from_box(spec.lo, spec.hi)]
    if isinstance(spec, HullObstacle):
        return [ConvexPolytope.from_vertices(spec.points)]
    if isinstance(spec, HalfspaceObstacle):
        return [ConvexPolytope(A=spec.A, b=spec.b)]
    if dim != 2:
        raise ValueError("l_polygon obstacles are 2D only")
    return split_l_polygon(np.asarray(spec.points, dtype=np.float64))


def parse_scene(text: str) -> Scene:
    """
    Raises:
        SceneParseError: The text is not valid JSON (with line and column), does not match the scene schema, or
            describes an invalid scene.
    """

    try:
        raw = json.loads(text)
    except json.JSONDecodeError as error:
        raise SceneParseError(error.msg, error.lineno, error.colno) from error
    try:
        document = SceneDocument.model_validate(raw)
    except ValidationError as error:
        raise SceneParseError(f"invalid scene: {error}") from error
    if document.schema_version != SCENE_SCHEMA_VERSION:
        raise SceneParseError(f"unsupported scene schema version {document.schema_version}")

    try:
        obstacles = [polytope for spec in document.obstacles for polytope in _obstacles(spec, document.dim)]
        scene = Scene(lo=document.bounds.lo, hi=document.bounds.hi, obstacles=tuple(obstacles))
    except (ValueError, ValidationError) as error:
        raise SceneParseError(f"invalid scene: {error}") from error
    if scene.dim != document.dim:
        raise SceneParseError(f"bounds are {scene.dim}D but the scene is tagged {document.dim}D")
    return scene


def format_scene(scene: Scene) -> str:
    """Scene text with every obstacle written as half-spaces."""

    document = SceneDocument(
        dim=scene.dim,
        bounds=Bounds(lo=scene.lo.tolist(), hi=scene.hi.tolist()),
        obstacles=[HalfspaceObstacle(A=o.A.tolist(), b=o.b.tolist()) for o in scene.obstacles],
    )
    return json.dumps(document.model_dump(mode="json"), indent=2) + "\n"


def load_scene(path: Path) -> Scene:
    logger.debug("reading scene %s", path)
    return parse_scene(Path(path).read_text())


def save_scene(scene: Scene, path: Path) -> None:
    Path(path).write_text(format_scene(scene))
