from __future__ import annotations

import hashlib
import json
from functools import cached_property
from typing_extensions import Any, Optional

import numpy as np
from pydantic import model_validator

from ..settings import resolve_eps
from ..value import Value
from ..value_object import FloatArray, ValueObject
from .polytope import ConvexPolytope, contains_points


class SceneFingerprint(Value[str]):
    """sha256 of the canonical scene description."""

    ...


class Scene(ValueObject):
    """
    A workspace: an axis-aligned box `[lo, hi]` holding convex obstacles. Obstacles may overlap; the obstacle region
    is their union.
    """

    lo: FloatArray
    hi: FloatArray
    obstacles: tuple[ConvexPolytope, ...] = ()

    @model_validator(mode="after")
    def _check_bounds(self) -> Scene:
        if self.lo.shape != self.hi.shape or self.lo.shape[0] not in (2, 3):
            raise ValueError("scene bounds must be two 2D or 3D corners")
        for index, obstacle in enumerate(self.obstacles):
            if obstacle.dim != self.dim:
                raise ValueError(f"obstacle {index} is {obstacle.dim}D in a {self.dim}D scene")
            vertices = obstacle.vertices
            if vertices.shape[0] == 0:
                raise ValueError(f"obstacle {index} is empty or unbounded")
            if np.any(vertices < self.lo - 1e-9) or np.any(vertices > self.hi + 1e-9):
                raise ValueError(f"obstacle {index} extends outside the scene bounds")
        return self

    @property
    def dim(self) -> int:
        return int(self.lo.shape[0])

    @cached_property
    def bounds(self) -> ConvexPolytope:
        return ConvexPolytope.from_box(self.lo, self.hi)

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.hi - self.lo))

    def scaled(self, factor: float) -> Scene:
        return Scene(
            lo=self.lo * factor,
            hi=self.hi * factor,
            obstacles=tuple(obstacle.scale(factor) for obstacle in self.obstacles),
        )

    def free_mask(self, points: Any, eps: Optional[float] = None) -> np.ndarray:
        """
        True for points inside the bounds and not strictly inside any obstacle (obstacle boundaries are free).
        """

        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        eps = resolve_eps(eps)
        mask = contains_points(self.bounds, points, eps)
        for obstacle in self.obstacles:
            mask &= ~contains_points(obstacle, points, -eps)
        return mask

    def is_free(self, point: Any, eps: Optional[float] = None) -> bool:
        return bool(self.free_mask([point], eps)[0])

    def fingerprint(self) -> SceneFingerprint:
        canonical = {
            "lo": np.round(self.lo, 9).tolist(),
            "hi": np.round(self.hi, 9).tolist(),
            "obstacles": [
                [np.round(obstacle.A, 9).tolist(), np.round(obstacle.b, 9).tolist()] for obstacle in self.obstacles
            ],
        }
        text = json.dumps(canonical, sort_keys=True, separators=(",", ":"))
        return SceneFingerprint(hashlib.sha256(text.encode()).hexdigest())
