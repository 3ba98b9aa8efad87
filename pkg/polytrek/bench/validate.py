from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing_extensions import Optional, Sequence

import numpy as np
from pydantic import Field
from scipy.spatial.transform import Rotation, Slerp

from ..geometry import Configuration, ConvexPolytope, RigidObject, RotationTable, Scene, rotation_2d
from ..motion import MotionPlan
from ..settings import get_settings, resolve_eps
from ..value_object import IntArray, ValueObject

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 100
_EDGE_POINTS = 20


class ValidationReport(ValueObject):
    """
    Result of replaying a motion densely. `penetration` is the deepest any sampled object point reaches into an
    obstacle; `exit_depth` is the farthest any point leaves the allowed region (the scene box, or the given
    polytopes).
    """

    samples: IntArray = Field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    "Poses checked per plan segment."

    penetration: float = 0.0
    exit_depth: float = 0.0
    eps: float = 0.0

    @property
    def passed(self) -> bool:
        return self.penetration <= self.eps and self.exit_depth <= self.eps


def body_samples(obj: RigidObject, per_edge: int = _EDGE_POINTS) -> np.ndarray:
    """Body-frame points along every edge and every center-to-vertex segment, vertices and center included."""

    points = [np.zeros((1, obj.dim)), obj.vertices]
    t = np.linspace(0.0, 1.0, per_edge + 1)[1:-1, None]
    for a, b in obj.surface_edges:
        points.append(obj.vertices[a] + t * (obj.vertices[b] - obj.vertices[a]))
    for vertex in obj.vertices:
        points.append(t * vertex)
    return np.vstack(points)


def interpolate_poses(
    q_from: Configuration, q_to: Configuration, table: RotationTable, steps: int
) -> tuple[np.ndarray, np.ndarray]:
    """
    `steps + 1` poses from `q_from` to `q_to`: positions on the straight line, orientations on the true arc (the
    shortest turn in 2D, spherical interpolation in 3D).

    Returns:
        tuple[np.ndarray, np.ndarray]: Positions (steps + 1, dim) and rotation matrices (steps + 1, dim, dim).
    """

    t = np.linspace(0.0, 1.0, steps + 1)
    positions = q_from.p + t[:, None] * (q_to.p - q_from.p)
    if q_from.rot_index == q_to.rot_index:
        matrices = np.repeat(table[q_from.rot_index][None], steps + 1, axis=0)
    elif table.dim == 2:
        start = table.angle(q_from.rot_index)
        turn = table.step_angle(q_from.rot_index, q_to.rot_index)
        matrices = np.array([rotation_2d(start + s * turn) for s in t])
    else:
        ends = Rotation.from_matrix(np.stack([table[q_from.rot_index], table[q_to.rot_index]]))
        matrices = Slerp([0.0, 1.0], ends)(t).as_matrix()
    return positions, matrices


def validate_poses(
    obj: RigidObject,
    positions: np.ndarray,
    matrices: np.ndarray,
    scene: Scene,
    regions: Optional[Sequence[ConvexPolytope]] = None,
    points: Optional[np.ndarray] = None,
) -> tuple[float, float]:
    """
    Deepest obstacle penetration and farthest region exit over a batch of poses, measured on sampled object points
    by their signed distance to each half-space (rows are unit normals).

    Returns:
        tuple[float, float]: (penetration, exit depth), both zero for a clean batch.
    """

    body = body_samples(obj) if points is None else points
    world = (np.einsum("nij,pj->npi", matrices, body) + positions[:, None, :]).reshape(-1, obj.dim)

    penetration = 0.0
    for obstacle in scene.obstacles:
        inside = (obstacle.b - world @ obstacle.A.T).min(axis=1)
        penetration = max(penetration, float(inside.max(initial=0.0)))

    allowed = list(regions) if regions else [scene.bounds]
    outside = np.stack([(world @ region.A.T - region.b).max(axis=1) for region in allowed])
    exit_depth = float(np.maximum(outside.min(axis=0), 0.0).max(initial=0.0))
    return max(penetration, 0.0), exit_depth


def validate_motion(
    waypoints: Sequence[Configuration],
    scene: Scene,
    obj: RigidObject,
    table: RotationTable,
    samples_per_segment: int = DEFAULT_SAMPLES,
    regions: Optional[Sequence[ConvexPolytope]] = None,
    eps: Optional[float] = None,
) -> ValidationReport:
    """Replay consecutive waypoints, `samples_per_segment` interpolation steps between each pair."""

    eps = resolve_eps(eps)
    body = body_samples(obj)
    penetration = exit_depth = 0.0
    for q_from, q_to in zip(waypoints, waypoints[1:]):
        positions, matrices = interpolate_poses(q_from, q_to, table, samples_per_segment)
        depth, outside = validate_poses(obj, positions, matrices, scene, regions, body)
        penetration, exit_depth = max(penetration, depth), max(exit_depth, outside)
    if len(waypoints) == 1:
        q = waypoints[0]
        penetration, exit_depth = validate_poses(obj, q.p[None, :], table[q.rot_index][None], scene, regions, body)
    count = max(len(waypoints) - 1, 0) * (samples_per_segment + 1) or len(waypoints)
    return ValidationReport(samples=[count], penetration=penetration, exit_depth=exit_depth, eps=eps)


def validate_path(
    plan: MotionPlan,
    scene: Scene,
    obj: RigidObject,
    table: RotationTable,
    samples_per_segment: int = DEFAULT_SAMPLES,
    regions: Optional[Sequence[ConvexPolytope]] = None,
    eps: Optional[float] = None,
) -> ValidationReport:
    """
    Check a whole plan against the scene by dense replay, one job per segment. Orientations follow the true arc,
    not the chord construction used when certifying the plan.
    """

    eps = resolve_eps(eps)

    def check(segment) -> ValidationReport:
        return validate_motion(segment.waypoints, scene, obj, table, samples_per_segment, regions, eps)

    with ThreadPoolExecutor(max_workers=get_settings().jobs) as pool:
        reports = list(pool.map(check, plan.segments))
    report = ValidationReport(
        samples=[int(r.samples.sum()) for r in reports],
        penetration=max((r.penetration for r in reports), default=0.0),
        exit_depth=max((r.exit_depth for r in reports), default=0.0),
        eps=eps,
    )
    if not report.passed:
        logger.warning(
            "plan fails validation: penetration %.3g, exit depth %.3g (eps %.1g)",
            report.penetration,
            report.exit_depth,
            eps,
        )
    return report
