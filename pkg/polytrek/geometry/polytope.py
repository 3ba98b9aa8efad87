from __future__ import annotations

import logging
from functools import cached_property
from itertools import combinations
from typing_extensions import Any, Optional, Self

import numpy as np
from pydantic import model_validator
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from ..errors import DimensionMismatch, NumericalFailure, UnboundedPolytope
from ..settings import resolve_eps
from ..value_object import FloatArray, ValueObject

logger = logging.getLogger(__name__)

_VERTEX_TOL = 1e-9


class ConvexPolytope(ValueObject):
    """
    A convex polytope in half-space form {x | A x <= b}.

    Rows of A are normalized to unit length on construction, so the slack `b - A x` of every row is a geometric
    distance and containment tolerances are lengths. A polytope produced by an intersection whose inscribed ball
    has negative radius is tagged `empty`.

    Example:
        ```
        square = ConvexPolytope.from_box([0, 0], [1, 1])
        contains_point(square, [0.5, 0.5])  # True
        ```
    """

    A: FloatArray
    b: FloatArray
    empty: bool = False

    @model_validator(mode="before")
    @classmethod
    def _normalize_rows(cls, data: Any) -> Any:
        if not isinstance(data, dict) or "A" not in data or "b" not in data:
            return data
        A = np.asarray(data["A"], dtype=np.float64)
        if A.ndim == 1:
            A = A.reshape(1, -1)
        b = np.asarray(data["b"], dtype=np.float64).reshape(-1)
        if A.ndim != 2 or A.shape[0] != b.shape[0]:
            raise ValueError(f"A {A.shape} and b {b.shape} do not describe the same number of half-spaces")
        if A.shape[1] not in (2, 3):
            raise ValueError(f"polytopes must be 2D or 3D, not {A.shape[1]}D")
        norms = np.linalg.norm(A, axis=1)
        if np.any(norms <= 1e-12):
            raise ValueError("every row of A must have nonzero norm")
        # Rows that are already unit stay bit-identical, so loading a saved polytope reproduces it exactly
        norms = np.where(np.abs(norms - 1.0) <= 4.0 * np.finfo(np.float64).eps, 1.0, norms)
        return {**data, "A": A / norms[:, None], "b": b / norms}

    @classmethod
    def from_box(cls, lo: Any, hi: Any) -> Self:
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        dim = lo.shape[0]
        eye = np.eye(dim)
        return cls(A=np.vstack([eye, -eye]), b=np.concatenate([hi, -lo]))

    @classmethod
    def from_vertices(cls, points: Any) -> Self:
        """
        Build the H-representation of the convex hull of `points` (at least dim + 1 affinely independent points).
        """

        points = np.asarray(points, dtype=np.float64)
        hull = ConvexHull(points)
        # Triangulated 3D hulls repeat one plane per triangle
        equations = np.unique(np.round(hull.equations, 12), axis=0)
        return cls(A=equations[:, :-1], b=-equations[:, -1])

    @property
    def dim(self) -> int:
        return int(self.A.shape[1])

    @property
    def n_rows(self) -> int:
        return int(self.A.shape[0])

    @cached_property
    def chebyshev(self) -> tuple[np.ndarray, float]:
        return chebyshev_center(self)

    @cached_property
    def vertices(self) -> np.ndarray:
        """
        Vertex enumeration over every dim-subset of rows. Returns an (n, dim) array sorted lexicographically,
        empty when the polytope is empty.
        """

        return _enumerate_vertices(self.A, self.b)

    def is_empty(self) -> bool:
        return self.empty or self.vertices.shape[0] == 0

    def translate(self, offset: Any) -> ConvexPolytope:
        offset = np.asarray(offset, dtype=np.float64)
        return ConvexPolytope(A=self.A, b=self.b + self.A @ offset, empty=self.empty)

    def scale(self, factor: float) -> ConvexPolytope:
        """Scale about the origin."""

        return ConvexPolytope(A=self.A, b=self.b * factor, empty=self.empty)

    def shrink(self, delta: float) -> ConvexPolytope:
        """Offset every face inward by `delta`. Points of the result have a `delta` ball inside the original."""

        return ConvexPolytope(A=self.A, b=self.b - delta, empty=self.empty)

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        vertices = self.vertices
        if vertices.shape[0] == 0:
            raise UnboundedPolytope("an empty polytope has no bounding box")
        return vertices.min(axis=0), vertices.max(axis=0)

    def affine_dimension(self) -> int:
        """Dimension of the affine hull of the vertices; -1 for an empty polytope."""

        vertices = self.vertices
        if vertices.shape[0] == 0:
            return -1
        if vertices.shape[0] == 1:
            return 0
        return int(np.linalg.matrix_rank(vertices[1:] - vertices[0], tol=1e-8))

    def reduce(self, eps: Optional[float] = None) -> ConvexPolytope:
        """Drop half-spaces implied by the others (one LP per row)."""

        tol = max(resolve_eps(eps), _VERTEX_TOL)
        keep = list(range(self.n_rows))
        for row in range(self.n_rows):
            others = [k for k in keep if k != row]
            if not others:
                continue
            # The tested row is relaxed by one unit so the LP stays bounded along its normal
            A_ub = np.vstack([self.A[others], self.A[row]])
            b_ub = np.concatenate([self.b[others], [self.b[row] + 1.0]])
            result = linprog(
                -self.A[row], A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * self.dim, method="highs"
            )
            if result.status == 0 and -result.fun <= self.b[row] + tol:
                keep.remove(row)
        if len(keep) == self.n_rows:
            return self
        return ConvexPolytope(A=self.A[keep], b=self.b[keep], empty=self.empty)

    def contains_polytope(self, other: ConvexPolytope, eps: Optional[float] = None) -> bool:
        """True when every vertex of `other` lies in this polytope."""

        vertices = other.vertices
        return vertices.shape[0] > 0 and bool(np.all(contains_points(self, vertices, eps)))


def _enumerate_vertices(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    m, dim = A.shape
    if m < dim:
        return np.zeros((0, dim))
    index = np.array(list(combinations(range(m), dim)), dtype=np.int64)
    systems = A[index]
    rhs = b[index]
    regular = np.abs(np.linalg.det(systems)) > 1e-10
    if not np.any(regular):
        return np.zeros((0, dim))
    points = np.linalg.solve(systems[regular], rhs[regular][..., None])[..., 0]
    scale = 1.0 + np.abs(b).max()
    feasible = np.all(points @ A.T <= b + _VERTEX_TOL * scale, axis=1)
    points = points[feasible]
    if points.shape[0] == 0:
        return np.zeros((0, dim))
    return np.unique(np.round(points, 9) + 0.0, axis=0)


def chebyshev_center(polytope: ConvexPolytope) -> tuple[np.ndarray, float]:
    """
    Center and radius of the largest ball inscribed in `polytope`. The radius is negative when the polytope is
    empty: it is then minus the smallest uniform relaxation of the half-spaces that makes them feasible.

    Raises:
        UnboundedPolytope: The inscribed-ball LP is unbounded.
    """

    dim = polytope.dim
    if polytope.n_rows == 0:
        raise UnboundedPolytope("a polytope without half-spaces is unbounded")
    objective = np.zeros(dim + 1)
    objective[-1] = -1.0
    # Rows are unit length, so the ball constraint is a.x + r <= b
    A_ub = np.hstack([polytope.A, np.ones((polytope.n_rows, 1))])
    result = linprog(objective, A_ub=A_ub, b_ub=polytope.b, bounds=[(None, None)] * (dim + 1), method="highs")
    if result.status == 3:
        raise UnboundedPolytope(f"the inscribed-ball LP of a {dim}D polytope with {polytope.n_rows} rows is unbounded")
    if result.status != 0:
        raise NumericalFailure(f"inscribed-ball LP failed: {result.message}")
    return result.x[:dim], float(result.x[dim])


def intersect(first: ConvexPolytope, second: ConvexPolytope, eps: Optional[float] = None) -> ConvexPolytope:
    """
    Row-concatenated intersection. The result is tagged empty when its inscribed-ball radius is below -eps; touching
    polytopes (radius within eps of zero) keep their lower-dimensional intersection.

    Raises:
        DimensionMismatch: The polytopes live in different dimensions.
    """

    if first.dim != second.dim:
        raise DimensionMismatch(f"cannot intersect a {first.dim}D polytope with a {second.dim}D polytope")
    A = np.vstack([first.A, second.A])
    b = np.concatenate([first.b, second.b])
    if first.empty or second.empty:
        return ConvexPolytope(A=A, b=b, empty=True)
    polytope = ConvexPolytope(A=A, b=b)
    _, radius = polytope.chebyshev
    if radius < -resolve_eps(eps):
        return ConvexPolytope(A=A, b=b, empty=True)
    return polytope


def contains_point(polytope: ConvexPolytope, x: Any, eps: Optional[float] = None) -> bool:
    """True iff A x <= b + eps row-wise; boundary points are inside."""

    x = np.asarray(x, dtype=np.float64)
    return bool(np.all(polytope.A @ x <= polytope.b + resolve_eps(eps)))


def contains_points(polytope: ConvexPolytope, points: Any, eps: Optional[float] = None) -> np.ndarray:
    """Vectorised `contains_point` over the rows of an (n, dim) array (or any (..., dim) array)."""

    points = np.asarray(points, dtype=np.float64)
    return np.all(points @ polytope.A.T <= polytope.b + resolve_eps(eps), axis=-1)


def segment_parameter_interval(
    A: np.ndarray, b: np.ndarray, starts: np.ndarray, ends: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """
    For segments x(t) = start + t (end - start), return the interval [lo, hi] of t in [0, 1] satisfying A x(t) <= b.
    The interval is empty where lo > hi.
    """

    direction = ends - starts
    alpha = starts @ A.T
    beta = direction @ A.T
    slack = b - alpha
    tiny = 1e-15
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = slack / beta
    upper = np.where(beta > tiny, ratio, np.inf).min(axis=1, initial=np.inf)
    lower = np.where(beta < -tiny, ratio, -np.inf).max(axis=1, initial=-np.inf)
    flat_ok = np.all((np.abs(beta) > tiny) | (slack >= 0.0), axis=1)
    lo = np.maximum(lower, 0.0)
    hi = np.minimum(upper, 1.0)
    lo = np.where(flat_ok, lo, 1.0)
    hi = np.where(flat_ok, hi, 0.0)
    return lo, hi


def segments_hit_polytope(
    polytope: ConvexPolytope, starts: Any, ends: Any, eps: Optional[float] = None
) -> np.ndarray:
    """
    True for each segment that penetrates `polytope` deeper than eps, tested exactly on the segment parameter.
    """

    starts = np.atleast_2d(np.asarray(starts, dtype=np.float64))
    ends = np.atleast_2d(np.asarray(ends, dtype=np.float64))
    lo, hi = segment_parameter_interval(polytope.A, polytope.b - resolve_eps(eps), starts, ends)
    return lo <= hi


def segment_hits_polytope(polytope: ConvexPolytope, start: Any, end: Any, eps: Optional[float] = None) -> bool:
    return bool(segments_hit_polytope(polytope, [start], [end], eps)[0])
