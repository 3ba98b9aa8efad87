from __future__ import annotations

from typing_extensions import Any, Iterable, Mapping, Optional, Sequence

import numpy as np

from ..geometry import Configuration, RigidObject, RotationTable


class LinearExpr:
    """
    A scalar affine expression `constant + sum_k terms[k] x[k]` over builder variable indices.

    Example:
        ```
        gap = LinearExpr.variable(x) - LinearExpr.variable(y) + 1.0
        builder.add_le(gap.terms, -gap.constant)  # x - y + 1 <= 0
        ```
    """

    __slots__ = ("terms", "constant")

    def __init__(self, terms: Optional[Mapping[int, float]] = None, constant: float = 0.0):
        self.terms: dict[int, float] = dict(terms or {})
        self.constant = float(constant)

    @classmethod
    def variable(cls, index: int, coefficient: float = 1.0) -> LinearExpr:
        return cls({index: coefficient})

    @classmethod
    def sum(cls, items: Iterable[LinearExpr]) -> LinearExpr:
        total = cls()
        for item in items:
            total = total + item
        return total

    def __add__(self, other: LinearExpr | float) -> LinearExpr:
        if not isinstance(other, LinearExpr):
            return LinearExpr(self.terms, self.constant + float(other))
        terms = dict(self.terms)
        for index, coefficient in other.terms.items():
            terms[index] = terms.get(index, 0.0) + coefficient
        return LinearExpr(terms, self.constant + other.constant)

    __radd__ = __add__

    def __neg__(self) -> LinearExpr:
        return LinearExpr({k: -v for k, v in self.terms.items()}, -self.constant)

    def __sub__(self, other: LinearExpr | float) -> LinearExpr:
        return self + (-other)

    def __mul__(self, factor: float) -> LinearExpr:
        return LinearExpr({k: v * factor for k, v in self.terms.items()}, self.constant * factor)

    __rmul__ = __mul__

    def evaluate(self, values: np.ndarray) -> float:
        return self.constant + sum(coefficient * values[index] for index, coefficient in self.terms.items())


class AffinePoint:
    """
    A point whose coordinates are affine in builder variables: `constant + sum_k x[k] terms[k]`, each term a
    coordinate vector.
    """

    __slots__ = ("constant", "terms")

    def __init__(self, constant: Any, terms: Optional[Mapping[int, np.ndarray]] = None):
        self.constant = np.asarray(constant, dtype=np.float64)
        self.terms: dict[int, np.ndarray] = {k: np.asarray(v, dtype=np.float64) for k, v in (terms or {}).items()}

    @classmethod
    def variable(cls, indices: Sequence[int]) -> AffinePoint:
        """The point whose coordinates are the variables `indices`."""

        dim = len(indices)
        eye = np.eye(dim)
        return cls(np.zeros(dim), {int(index): eye[axis] for axis, index in enumerate(indices)})

    @property
    def dim(self) -> int:
        return int(self.constant.shape[0])

    def is_constant(self) -> bool:
        return not self.terms

    def __add__(self, other: AffinePoint | np.ndarray) -> AffinePoint:
        if not isinstance(other, AffinePoint):
            return AffinePoint(self.constant + np.asarray(other, dtype=np.float64), self.terms)
        terms = dict(self.terms)
        for index, vector in other.terms.items():
            terms[index] = terms[index] + vector if index in terms else vector
        return AffinePoint(self.constant + other.constant, terms)

    __radd__ = __add__

    def __sub__(self, other: AffinePoint | np.ndarray) -> AffinePoint:
        return self + (other * -1.0 if isinstance(other, AffinePoint) else -np.asarray(other, dtype=np.float64))

    def __mul__(self, factor: float) -> AffinePoint:
        return AffinePoint(self.constant * factor, {k: v * factor for k, v in self.terms.items()})

    __rmul__ = __mul__

    def same_as(self, other: AffinePoint, tol: float = 1e-12) -> bool:
        difference = self - other
        if np.abs(difference.constant).max(initial=0.0) > tol:
            return False
        return all(np.abs(vector).max(initial=0.0) <= tol for vector in difference.terms.values())

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(variable indices (V,), coefficient matrix (V, dim), constant (dim,))."""

        indices = np.fromiter(self.terms.keys(), dtype=np.int64, count=len(self.terms))
        if not self.terms:
            return indices, np.zeros((0, self.dim)), self.constant
        return indices, np.vstack(list(self.terms.values())), self.constant

    def evaluate(self, values: np.ndarray) -> np.ndarray:
        point = self.constant.copy()
        for index, vector in self.terms.items():
            point += values[index] * vector
        return point


def lerp(start: AffinePoint, end: AffinePoint, eta: float) -> AffinePoint:
    return start * (1.0 - eta) + end * eta


class PoseExpr:
    """
    The body points (center, then vertices) of an object at one waypoint, as affine points. A symbolic pose uses
    `sum_k beta[k] R_k v + p` over one-hot rotation binaries; a constant pose comes from a Configuration.
    """

    def __init__(self, center: AffinePoint, vertices: list[AffinePoint]):
        self.center = center
        self.vertices = vertices

    @classmethod
    def from_configuration(cls, obj: RigidObject, q: Configuration, table: RotationTable) -> PoseExpr:
        rotated = obj.vertices @ table[q.rot_index].T + q.p
        return cls(AffinePoint(q.p), [AffinePoint(vertex) for vertex in rotated])

    @classmethod
    def symbolic(
        cls,
        obj: RigidObject,
        position: Sequence[int],
        rotation: Mapping[int, int],
        table: RotationTable,
    ) -> PoseExpr:
        """
        Args:
            position (Sequence[int]): Builder indices of the position coordinates.
            rotation (Mapping[int, int]): Rotation index to the builder index of its one-hot binary.
        """

        center = AffinePoint.variable(position)
        vertices = []
        for vertex in obj.vertices:
            terms = {binary: table[k] @ vertex for k, binary in rotation.items()}
            vertices.append(center + AffinePoint(np.zeros(obj.dim), terms))
        return cls(center, vertices)

    def body_point(self, index: int) -> AffinePoint:
        """Index into `RigidObject.body_points` order: 0 is the center."""

        return self.center if index == 0 else self.vertices[index - 1]
