from __future__ import annotations

import logging
from pathlib import Path
from typing_extensions import Optional

import numpy as np
from matplotlib.figure import Figure
from matplotlib.patches import Polygon, Rectangle
from scipy.spatial import ConvexHull, QhullError

from ..decompose import CoarseGraph
from ..geometry import RigidObject, RotationTable, Scene, transform_object
from ..motion import MotionPlan
from ..value_object import ValueObject

logger = logging.getLogger(__name__)

OBSTACLE_COLOR = "#f4a6c6"
SWEEP_COLOR = "#5cb85c"
COVER_COLOR = "#4a7fd4"


class RenderSummary(ValueObject):
    """Elements drawn, by kind."""

    obstacles: int = 0
    polytopes: int = 0
    adjacencies: int = 0
    sweeps: int = 0
    poses: int = 0


def _outline(points: np.ndarray) -> Optional[np.ndarray]:
    """Hull of 2D points in counter-clockwise order, or None when they are collinear."""

    try:
        hull = ConvexHull(points)
    except QhullError:
        return None
    return points[hull.vertices]


def render_svg(
    scene: Scene,
    path: Path,
    coarse: Optional[CoarseGraph] = None,
    motion: Optional[MotionPlan] = None,
    obj: Optional[RigidObject] = None,
    table: Optional[RotationTable] = None,
) -> RenderSummary:
    """
    Draw a 2D scene as SVG: obstacles in pink, the polytope cover in blue with centers and adjacency lines, one green
    swept region per plan segment, and the start and goal poses outlined. Every element carries an SVG id
    (`obstacle-k`, `polytope-k`, `adjacency-k`, `sweep-k`, `pose-start`, `pose-goal`).
    """

    counts = dict(obstacles=0, polytopes=0, adjacencies=0, sweeps=0, poses=0)
    figure = Figure(figsize=(6, 6))
    axes = figure.add_subplot()
    lo, hi = scene.lo, scene.hi
    axes.add_patch(Rectangle(lo, *(hi - lo), fill=False, edgecolor="black", gid="bounds"))
    for k, obstacle in enumerate(scene.obstacles):
        axes.add_patch(Polygon(_outline(obstacle.vertices), color=OBSTACLE_COLOR, gid=f"obstacle-{k}"))
        counts["obstacles"] += 1

    if coarse is not None:
        centers = [polytope.chebyshev[0] for polytope in coarse.polytopes]
        for k, polytope in enumerate(coarse.polytopes):
            axes.add_patch(Polygon(_outline(polytope.vertices), color=COVER_COLOR, alpha=0.2, gid=f"polytope-{k}"))
            axes.plot(*centers[k], marker="o", markersize=2, color=COVER_COLOR)
            counts["polytopes"] += 1
        for k, (i, j) in enumerate(coarse.edge_list):
            (line,) = axes.plot(*np.transpose([centers[i], centers[j]]), color=COVER_COLOR, linewidth=0.8)
            line.set_gid(f"adjacency-{k}")
            counts["adjacencies"] += 1

    if motion is not None and not motion.is_empty and obj is not None and table is not None:
        for k, segment in enumerate(motion.segments):
            posed = np.vstack([transform_object(obj, q, table) for q in segment.waypoints] + [segment.start.p])
            outline = _outline(posed)
            if outline is None:
                continue
            axes.add_patch(Polygon(outline, color=SWEEP_COLOR, alpha=0.4, gid=f"sweep-{k}"))
            counts["sweeps"] += 1
        ends = motion.segments[0].start, motion.segments[-1].end
        for role, q in zip(("start", "goal"), ends):
            posed = transform_object(obj, q, table)
            outline = _outline(posed) if obj.n_vertices > 2 else posed
            axes.add_patch(Polygon(outline, fill=False, edgecolor="black", gid=f"pose-{role}"))
            counts["poses"] += 1

    axes.set_xlim(lo[0], hi[0])
    axes.set_ylim(lo[1], hi[1])
    axes.set_aspect("equal")
    figure.savefig(path, format="svg")
    logger.info("rendered %s", path)
    return RenderSummary(**counts)


def _hull_triangles(points: np.ndarray) -> np.ndarray:
    try:
        hull = ConvexHull(points)
    except QhullError:
        return np.zeros((0, 3, 3))
    return points[hull.simplices]


def render_mesh(
    scene: Scene,
    path: Path,
    coarse: Optional[CoarseGraph] = None,
    motion: Optional[MotionPlan] = None,
    obj: Optional[RigidObject] = None,
    table: Optional[RotationTable] = None,
) -> RenderSummary:
    """
    Write a 3D scene as a triangle soup, one `t <group> x1 y1 z1 x2 y2 z2 x3 y3 z3` line per triangle, groups being
    `obstacle-k`, `polytope-k` and `sweep-k`.
    """

    counts = dict(obstacles=0, polytopes=0, adjacencies=0, sweeps=0, poses=0)
    lines = ["# polytrek triangle soup"]

    def emit(group: str, points: np.ndarray) -> bool:
        triangles = _hull_triangles(points)
        for triangle in triangles:
            lines.append(f"t {group} " + " ".join(f"{v:.9g}" for v in triangle.reshape(-1)))
        return len(triangles) > 0

    for k, obstacle in enumerate(scene.obstacles):
        counts["obstacles"] += emit(f"obstacle-{k}", obstacle.vertices)
    if coarse is not None:
        for k, polytope in enumerate(coarse.polytopes):
            counts["polytopes"] += emit(f"polytope-{k}", polytope.vertices)
        counts["adjacencies"] = len(coarse.edge_list)
    if motion is not None and obj is not None and table is not None:
        for k, segment in enumerate(motion.segments):
            posed = np.vstack([transform_object(obj, q, table) for q in segment.waypoints])
            counts["sweeps"] += emit(f"sweep-{k}", posed)

    Path(path).write_text("\n".join(lines) + "\n")
    logger.info("wrote mesh %s", path)
    return RenderSummary(**counts)


def render(
    scene: Scene,
    path: Path,
    coarse: Optional[CoarseGraph] = None,
    motion: Optional[MotionPlan] = None,
    obj: Optional[RigidObject] = None,
    table: Optional[RotationTable] = None,
) -> RenderSummary:
    """SVG for 2D scenes, a triangle-soup mesh for 3D."""

    draw = render_svg if scene.dim == 2 else render_mesh
    return draw(scene, path, coarse, motion, obj, table)
