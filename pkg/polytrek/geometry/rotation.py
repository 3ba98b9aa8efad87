from __future__ import annotations

import itertools
import math
from functools import cached_property
from typing_extensions import Self

import numpy as np
from pydantic import model_validator

from ..value_object import FloatArray, ValueObject

_ORTHO_TOL = 1e-9


def rotation_2d(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def wrap_angle(theta: float | np.ndarray) -> float | np.ndarray:
    """Wrap to (-pi, pi]."""

    wrapped = np.mod(np.asarray(theta) + np.pi, 2.0 * np.pi) - np.pi
    wrapped = np.where(wrapped <= -np.pi, wrapped + 2.0 * np.pi, wrapped)
    return float(wrapped) if np.ndim(wrapped) == 0 else wrapped


def _cube_group() -> np.ndarray:
    matrices = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1.0, -1.0), repeat=3):
            matrix = np.zeros((3, 3))
            for row, (col, sign) in enumerate(zip(perm, signs)):
                matrix[row, col] = sign
            if np.linalg.det(matrix) > 0:
                matrices.append(matrix)
    # Identity first, the rest in a fixed order
    matrices.sort(key=lambda m: (not np.allclose(m, np.eye(3)), tuple(-m.flatten())))
    return np.array(matrices)


def _about_z(theta: float) -> np.ndarray:
    matrix = np.eye(3)
    matrix[:2, :2] = rotation_2d(theta)
    return matrix


class RotationTable(ValueObject):
    """
    The discrete rotation set {R_0 .. R_{n_R - 1}}. In 2D, R_k turns by k 2pi/n_R, so index 0 is the identity. In
    3D, `n_R = 24` is the proper rotation group of the cube (identity first) and other counts turn about z.
    """

    dim: int
    matrices: FloatArray

    @model_validator(mode="after")
    def _check_rotations(self) -> RotationTable:
        if self.matrices.ndim != 3 or self.matrices.shape[1:] != (self.dim, self.dim):
            raise ValueError(f"expected ({self.dim}, {self.dim}) rotation matrices, got {self.matrices.shape}")
        if self.matrices.shape[0] < 1:
            raise ValueError("a rotation table needs at least one rotation")
        eye = np.eye(self.dim)
        for index, matrix in enumerate(self.matrices):
            if not np.allclose(matrix.T @ matrix, eye, atol=_ORTHO_TOL) or abs(np.linalg.det(matrix) - 1.0) > 1e-9:
                raise ValueError(f"rotation {index} is not a proper rotation")
        return self

    @classmethod
    def for_dimension(cls, dim: int, n_r: int) -> Self:
        if n_r < 1:
            raise ValueError("n_r must be positive")
        if dim == 2:
            matrices = np.array([rotation_2d(2.0 * math.pi * k / n_r) for k in range(n_r)])
        elif dim == 3 and n_r == 24:
            matrices = _cube_group()
        elif dim == 3:
            matrices = np.array([_about_z(2.0 * math.pi * k / n_r) for k in range(n_r)])
        else:
            raise ValueError(f"unsupported dimension {dim}")
        return cls(dim=dim, matrices=matrices)

    @classmethod
    def default_count(cls, dim: int) -> int:
        return 12 if dim == 2 else 24

    @property
    def n_r(self) -> int:
        return int(self.matrices.shape[0])

    @property
    def step(self) -> float:
        return 2.0 * math.pi / self.n_r

    def __len__(self) -> int:
        return self.n_r

    def __getitem__(self, index: int) -> np.ndarray:
        return self.matrices[index]

    def angle(self, index: int) -> float:
        """2D heading of rotation `index`."""

        matrix = self.matrices[index]
        return math.atan2(matrix[1, 0], matrix[0, 0])

    def step_angle(self, first: int, second: int) -> float:
        """
        Signed shortest turn from `first` to `second` in 2D, or the (unsigned) geodesic angle between them in 3D.
        """

        if self.dim == 2:
            return wrap_angle(self.angle(second) - self.angle(first))
        relative = self.matrices[first].T @ self.matrices[second]
        return math.acos(max(-1.0, min(1.0, (np.trace(relative) - 1.0) / 2.0)))

    @cached_property
    def angle_table(self) -> np.ndarray:
        """(n_R, n_R) table of `step_angle`."""

        return np.array([[self.step_angle(k, j) for j in range(self.n_r)] for k in range(self.n_r)])

    def allowed_steps(self, dtheta_max: float) -> list[tuple[int, int]]:
        """Ordered rotation pairs (k, k') reachable in one step of at most `dtheta_max`, diagonal included."""

        table = np.abs(self.angle_table)
        return [(k, j) for k in range(self.n_r) for j in range(self.n_r) if table[k, j] <= dtheta_max + 1e-12]

    def neighbours(self, index: int) -> list[int]:
        """Rotations one smallest step away from `index`."""

        table = np.abs(self.angle_table[index])
        others = [k for k in range(self.n_r) if k != index]
        if not others:
            return []
        smallest = min(table[k] for k in others)
        return [k for k in others if table[k] <= smallest + 1e-9]
