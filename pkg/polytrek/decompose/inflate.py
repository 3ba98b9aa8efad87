from __future__ import annotations

import logging
from typing_extensions import Any, Optional

import numpy as np
from pydantic import Field
from scipy.optimize import minimize

from ..errors import SeedInObstacle
from ..geometry import ConvexPolytope, Scene, contains_point
from ..settings import resolve_eps
from ..value_object import ValueObject

logger = logging.getLogger(__name__)


class InflationParams(ValueObject):
    max_rounds: int = Field(default=20, ge=1)
    "Upper bound on hyperplane/recentering rounds."

    tolerance: float = Field(default=1e-3, gt=0.0)
    "Stop once the inscribed radius grows by less than this."

    reduce: bool = True
    "Drop redundant half-spaces from the final region."


def closest_point(vertices: np.ndarray, target: np.ndarray) -> np.ndarray:
    """
    Closest point to `target` in the convex hull of `vertices`: the projection as a quadratic program over convex
    weights (non-negative, summing to one), solved by SLSQP from the nearest vertex.
    """

    vertices = np.asarray(vertices, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    count = vertices.shape[0]
    distances = np.linalg.norm(vertices - target, axis=1)
    start = np.zeros(count)
    start[int(np.argmin(distances))] = 1.0
    if count == 1 or distances.max() == 0.0:
        return vertices[0].copy()

    # Unit-scale coordinates centered on the target keep the stopping tolerance meaningful
    scale = float(distances.max())
    local = (vertices - target) / scale

    def objective(weights: np.ndarray) -> tuple[float, np.ndarray]:
        residual = weights @ local
        return float(residual @ residual), 2.0 * (local @ residual)

    result = minimize(
        objective,
        start,
        jac=True,
        method="SLSQP",
        bounds=[(0.0, 1.0)] * count,
        constraints=[{"type": "eq", "fun": lambda w: w.sum() - 1.0, "jac": lambda w: np.ones_like(w)}],
        options={"ftol": 1e-14, "maxiter": 500},
    )
    weights = np.clip(result.x, 0.0, None)
    if not result.success:
        logger.debug("projection stopped early: %s", result.message)
    if not np.all(np.isfinite(weights)) or weights.sum() <= 0.0:
        weights = start
    return (weights / weights.sum()) @ vertices


def separating_planes(center: np.ndarray, scene: Scene) -> tuple[np.ndarray, np.ndarray]:
    """
    Half-spaces `a.x <= c` keeping `center` away from every obstacle. Obstacles are visited nearest first; each one
    not yet excluded by an earlier plane gets a plane facing it along the direction to its closest point, shifted onto
    its nearest vertex so that the whole obstacle lies on the far side.

    Raises:
        SeedInObstacle: `center` touches an obstacle.
    """

    candidates = []
    for obstacle in scene.obstacles:
        point = closest_point(obstacle.vertices, center)
        candidates.append((float(np.linalg.norm(point - center)), point, obstacle))
    candidates.sort(key=lambda item: item[0])

    normals: list[np.ndarray] = []
    offsets: list[float] = []
    for distance, point, obstacle in candidates:
        vertices = obstacle.vertices
        if any(np.all(vertices @ normal >= offset - 1e-9) for normal, offset in zip(normals, offsets)):
            continue
        if distance <= 1e-12:
            raise SeedInObstacle(f"point {center.tolist()} touches an obstacle")
        normal = (point - center) / distance
        offset = float(np.min(vertices @ normal))
        if offset - normal @ center <= 1e-12:
            raise SeedInObstacle(f"point {center.tolist()} cannot be separated from an obstacle")
        normals.append(normal)
        offsets.append(offset)
    dim = scene.dim
    return np.array(normals).reshape(-1, dim), np.array(offsets)


def inflate_region(
    seed: Any, scene: Scene, params: InflationParams = InflationParams(), eps: Optional[float] = None
) -> ConvexPolytope:
    """
    Grow an obstacle-free polytope around `seed` inside the scene bounds, alternating separating-hyperplane
    generation around the current inscribed-ball center with Chebyshev recentering.

    Raises:
        SeedInObstacle: The seed is outside the free space.
    """

    seed = np.asarray(seed, dtype=np.float64)
    eps = resolve_eps(eps)
    if not scene.is_free(seed, eps):
        raise SeedInObstacle(f"seed {seed.tolist()} is not in the free space")
    bounds = scene.bounds
    if not scene.obstacles:
        return bounds

    center = seed
    radius = 0.0
    region: Optional[ConvexPolytope] = None
    for round_index in range(params.max_rounds):
        normals, offsets = separating_planes(center, scene)
        candidate = ConvexPolytope(A=np.vstack([bounds.A, normals]), b=np.concatenate([bounds.b, offsets]))
        if not contains_point(candidate, seed, eps):
            logger.debug("round %d lost the seed, keeping the previous region", round_index)
            break
        new_center, new_radius = candidate.chebyshev
        if region is not None and new_radius < radius:
            break
        improved = new_radius - radius
        region, center, radius = candidate, new_center, new_radius
        if improved < params.tolerance:
            break
    if region is None:
        raise SeedInObstacle(f"no region found around seed {seed.tolist()}")
    return region.reduce(eps) if params.reduce else region
