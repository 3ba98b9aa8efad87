from __future__ import annotations

import math
from enum import Enum
from typing_extensions import Optional, Sequence

import numpy as np
from pydantic import Field

from ..errors import MixedMotion, RotationStepTooLarge
from ..geometry import Configuration, RigidObject, RotationTable, rotation_2d
from ..value_object import FloatArray, ValueObject
from .expr import AffinePoint, PoseExpr

_SAME_TOL = 1e-9


class SegmentKind(str, Enum):
    SPOKE = "spoke"
    "Center to vertex at one pose."

    EDGE = "edge"
    "Object edge at one pose."

    SWEEP = "sweep"
    "Path of one vertex between two poses: the connecting segment, or one of the two arc chords."


class ArcApproxParams(ValueObject):
    """Largest rotation allowed in one step. Arcs of steps up to this angle are replaced by two tangent chords."""

    dtheta_max: float = Field(default=math.pi / 3.0, gt=0.0, lt=math.pi)


class SegmentSet(ValueObject):
    """Concrete segments `starts[k] -> ends[k]` bounding the region swept between two waypoints."""

    starts: FloatArray
    ends: FloatArray
    kinds: tuple[SegmentKind, ...]

    def __len__(self) -> int:
        return len(self.kinds)

    def count(self, kind: SegmentKind) -> int:
        return sum(1 for item in self.kinds if item is kind)


class SweptSurface(ValueObject):
    """
    Faces bounding a 3D translation sweep: the object's triangles at both poses and one parallelogram
    (v_a, v_b, v_b + d, v_a + d) per edge.
    """

    triangles: FloatArray
    parallelograms: FloatArray


def chord_scale(dtheta: float) -> float:
    """Radial inflation 1 / cos(dtheta / 2) of the apex where the tangents at both arc ends meet."""

    return 1.0 / math.cos(dtheta / 2.0)


def apex_matrix(table: RotationTable, first: int, second: int) -> np.ndarray:
    """
    Linear map from a body-frame vertex to its chord apex offset for the 2D step `first -> second`: the vertex
    rotated to the middle heading and pushed out by `chord_scale`. The identity step maps to R_first.
    """

    if first == second:
        return np.array(table[first])
    dtheta = table.step_angle(first, second)
    middle = table.angle(first) + dtheta / 2.0
    return chord_scale(dtheta) * rotation_2d(middle)


def static_segments(obj: RigidObject, pose: PoseExpr) -> list[tuple[AffinePoint, AffinePoint, SegmentKind]]:
    """Object edges and center-to-vertex segments of one pose."""

    segments = []
    for a, b in obj.surface_edges:
        segments.append((pose.vertices[a], pose.vertices[b], SegmentKind.EDGE))
    for vertex in pose.vertices:
        segments.append((pose.center, vertex, SegmentKind.SPOKE))
    return segments


def sweep_segments(
    pose: PoseExpr, following: PoseExpr, apexes: Optional[Sequence[AffinePoint]] = None
) -> list[tuple[AffinePoint, AffinePoint, SegmentKind]]:
    """
    Per-vertex sweep: `V_t -> V_t+1` without apexes, `V_t -> A* -> V_t+1` with them. Chords that coincide exactly
    with a point are dropped.
    """

    segments = []
    for index, (vertex, next_vertex) in enumerate(zip(pose.vertices, following.vertices)):
        if apexes is None:
            segments.append((vertex, next_vertex, SegmentKind.SWEEP))
            continue
        apex = apexes[index]
        for start, end in ((vertex, apex), (apex, next_vertex)):
            if not start.same_as(end):
                segments.append((start, end, SegmentKind.SWEEP))
    return segments


def reachable_boundary_2d(
    obj: RigidObject,
    q_from: Configuration,
    q_to: Configuration,
    table: RotationTable,
    params: ArcApproxParams = ArcApproxParams(),
) -> SegmentSet:
    """
    Segments bounding the region a 2D object sweeps between two waypoints that differ in translation only or in
    rotation only.

    A translation gives the edges and spokes at both poses plus one connecting segment per vertex. A rotation gives
    the edges and spokes at both poses plus two chords per vertex through the apex where the arc's end tangents meet.
    Identical waypoints give the edges and spokes of the single pose.

    Raises:
        MixedMotion: The waypoints differ in both translation and rotation.
        RotationStepTooLarge: The rotation exceeds `params.dtheta_max`.
    """

    translated = np.abs(q_to.p - q_from.p).max() > _SAME_TOL
    rotated = q_to.rot_index != q_from.rot_index
    if translated and rotated:
        raise MixedMotion(f"waypoints differ in translation and rotation ({q_from.rot_index} -> {q_to.rot_index})")
    pose = PoseExpr.from_configuration(obj, q_from, table)
    if not translated and not rotated:
        return _concrete(static_segments(obj, pose))

    following = PoseExpr.from_configuration(obj, q_to, table)
    segments = static_segments(obj, pose) + static_segments(obj, following)
    if translated:
        return _concrete(segments + sweep_segments(pose, following))

    dtheta = abs(table.step_angle(q_from.rot_index, q_to.rot_index))
    if dtheta > params.dtheta_max + 1e-12:
        raise RotationStepTooLarge(f"rotation step {dtheta:.4f} rad exceeds {params.dtheta_max:.4f} rad")
    matrix = apex_matrix(table, q_from.rot_index, q_to.rot_index)
    apexes = [AffinePoint(matrix @ vertex + q_from.p) for vertex in obj.vertices]
    return _concrete(segments + sweep_segments(pose, following, apexes))


def reachable_boundary_3d(obj: RigidObject, p_from: np.ndarray, p_to: np.ndarray, rotation: np.ndarray) -> SweptSurface:
    """
    Faces bounding the region a 3D object sweeps under pure translation: every mesh triangle at both poses and the
    parallelogram swept by each object edge. With zero translation the parallelograms collapse onto the edges.
    """

    p_from = np.asarray(p_from, dtype=np.float64)
    p_to = np.asarray(p_to, dtype=np.float64)
    world = obj.vertices @ np.asarray(rotation).T
    faces = obj.faces.reshape(-1, 3)
    triangles = np.concatenate([world[faces] + p_from, world[faces] + p_to]).reshape(-1, 3, obj.dim)
    edges = obj.surface_edges
    a, b = world[edges[:, 0]], world[edges[:, 1]]
    parallelograms = np.stack([a + p_from, b + p_from, b + p_to, a + p_to], axis=1)
    return SweptSurface(triangles=triangles, parallelograms=parallelograms)


def _concrete(segments: list[tuple[AffinePoint, AffinePoint, SegmentKind]]) -> SegmentSet:
    dim = segments[0][0].dim
    starts = np.array([start.constant for start, _, _ in segments]).reshape(-1, dim)
    ends = np.array([end.constant for _, end, _ in segments]).reshape(-1, dim)
    return SegmentSet(starts=starts, ends=ends, kinds=tuple(kind for _, _, kind in segments))
