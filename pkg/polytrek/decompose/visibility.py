from __future__ import annotations

import logging
from typing_extensions import Optional

import numpy as np
from pydantic import Field
from scipy.spatial import cKDTree

from ..errors import SamplingExhausted
from ..geometry import Scene, segments_hit_polytope
from ..value_object import FloatArray, IntArray, ValueObject

logger = logging.getLogger(__name__)

DEFAULT_RADIUS_FRACTION = 0.25


class VisibilityGraph(ValueObject):
    """Free sample points and the collision-free segments joining pairs of them within the connection radius."""

    points: FloatArray
    edges: IntArray = Field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))

    @property
    def n_edges(self) -> int:
        return int(self.edges.reshape(-1, 2).shape[0])

    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        edges = self.edges.reshape(-1, 2)
        return self.points[edges[:, 0]], self.points[edges[:, 1]]

    def lengths(self) -> np.ndarray:
        starts, ends = self.segments()
        return np.linalg.norm(ends - starts, axis=1)


def sample_visibility_graph(
    scene: Scene, n_v: int, radius: Optional[float] = None, seed: int = 0, eps: Optional[float] = None
) -> VisibilityGraph:
    """
    Sample `n_v` free points uniformly in the scene by rejection and join every pair closer than `radius` (default a
    quarter of the scene diagonal) whose segment does not penetrate an obstacle.

    Raises:
        SamplingExhausted: Fewer than `n_v` free points after `100 * n_v` draws.
    """

    if n_v <= 0:
        raise ValueError("n_v must be positive")
    rng = np.random.default_rng(seed)
    budget = 100 * n_v
    drawn = 0
    accepted: list[np.ndarray] = []
    found = 0
    while found < n_v and drawn < budget:
        batch = min(max(n_v, 64), budget - drawn)
        candidates = rng.uniform(scene.lo, scene.hi, size=(batch, scene.dim))
        drawn += batch
        free = candidates[scene.free_mask(candidates, eps)]
        accepted.append(free)
        found += free.shape[0]
    if found < n_v:
        raise SamplingExhausted(f"only {found} of {n_v} free points after {budget} draws")
    points = np.vstack(accepted)[:n_v]

    radius = DEFAULT_RADIUS_FRACTION * scene.diagonal if radius is None else radius
    pairs = cKDTree(points).query_pairs(radius, output_type="ndarray").reshape(-1, 2)
    pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
    keep = np.ones(pairs.shape[0], dtype=bool)
    for obstacle in scene.obstacles:
        if not np.any(keep):
            break
        live = np.flatnonzero(keep)
        hits = segments_hit_polytope(obstacle, points[pairs[live, 0]], points[pairs[live, 1]], eps)
        keep[live[hits]] = False
    logger.debug("visibility graph: %d points, %d of %d candidate edges free", n_v, int(keep.sum()), len(pairs))
    return VisibilityGraph(points=points, edges=pairs[keep])
