from __future__ import annotations

from itertools import combinations
from typing_extensions import Optional, Sequence

import numpy as np
from pydantic import Field

from ..geometry import ConvexPolytope, contains_points
from ..milp import MilpBuilder, Sense
from ..settings import resolve_eps
from ..value_object import IntArray, ValueObject
from .expr import AffinePoint, lerp

DEFAULT_DIVISIONS = 10


class SegmentBlock(ValueObject):
    """
    Builder indices of the binaries one segment adds.

    `points[i, k]` activates containment of interpolation point k in polytope i, `cond1[i]` certifies the segment
    inside polytope i, and `cond2` lists `(i, j, binary)` for every unordered polytope pair.
    """

    points: IntArray
    cond1: IntArray
    cond2: IntArray = Field(default_factory=lambda: np.zeros((0, 3), dtype=np.int64))


def segment_constraints(
    builder: MilpBuilder,
    start: AffinePoint,
    end: AffinePoint,
    polytopes: Sequence[ConvexPolytope],
    n_divisions: int = DEFAULT_DIVISIONS,
    eps: Optional[float] = None,
    prefix: str = "s",
) -> SegmentBlock:
    """
    Add the rows certifying that the segment `start -> end` stays inside the union of `polytopes`.

    The segment is sampled at `n_divisions + 1` equally spaced points. Every point must be activated in at least one
    polytope, and one of the two conditions must hold: both endpoints activated in the same polytope, or, for some
    pair of polytopes, the endpoints activated in the pair and at least one sampled point activated in both.

    Coincident endpoints reduce to one point that must be activated somewhere.
    """

    eps = resolve_eps(eps)
    big_m = builder.big_m
    if big_m <= 0.0:
        raise ValueError("segment constraints need a builder with a positive big_m")
    n_poly = len(polytopes)
    if start.same_as(end):
        points = [start]
    else:
        points = [lerp(start, end, k / n_divisions) for k in range(n_divisions + 1)]
    n_points = len(points)

    flags = np.array(
        [builder.add_binaries(n_points, f"{prefix}_in{i}_") for i in range(n_poly)], dtype=np.int64
    ).reshape(n_poly, n_points)
    for i, polytope in enumerate(polytopes):
        for k, point in enumerate(points):
            _add_activated_containment(builder, polytope, point, int(flags[i, k]), eps, big_m)

    # Each sampled point covered by some polytope
    for k in range(n_points):
        builder.add_ge({int(flags[i, k]): 1.0 for i in range(n_poly)}, 1.0)

    if n_points == 1:
        return SegmentBlock(points=flags, cond1=np.zeros(0, dtype=np.int64))

    last = n_points - 1
    cond1 = builder.add_binaries(n_poly, f"{prefix}_c1_")
    for i in range(n_poly):
        builder.add_le({int(cond1[i]): 1.0, int(flags[i, 0]): -1.0}, 0.0)
        builder.add_le({int(cond1[i]): 1.0, int(flags[i, last]): -1.0}, 0.0)

    cond2 = []
    overlap_m = n_points + 1
    for i, j in combinations(range(n_poly), 2):
        binary = builder.add_binary(f"{prefix}_c2_{i}{j}")
        cond2.append((i, j, binary))
        # sum_k (b_ik + b_jk - 1) >= 1 - overlap_m (1 - c2)
        terms = {int(flags[i, k]): 1.0 for k in range(n_points)}
        for k in range(n_points):
            terms[int(flags[j, k])] = 1.0
        terms[binary] = -float(overlap_m)
        builder.add_ge(terms, float(n_points + 1 - overlap_m))
        # Endpoints must sit in the pair
        for k in (0, last):
            builder.add_le({binary: 1.0, int(flags[i, k]): -1.0, int(flags[j, k]): -1.0}, 0.0)

    disjunction = {int(c): 1.0 for c in cond1}
    disjunction.update({binary: 1.0 for _, _, binary in cond2})
    builder.add_ge(disjunction, 1.0)
    return SegmentBlock(points=flags, cond1=cond1, cond2=np.array(cond2, dtype=np.int64).reshape(-1, 3))


def _add_activated_containment(
    builder: MilpBuilder, polytope: ConvexPolytope, point: AffinePoint, flag: int, eps: float, big_m: float
) -> None:
    # A x + M flag <= b + eps + M
    indices, coefficients, constant = point.as_arrays()
    row_values = polytope.A @ coefficients.T
    n_rows = polytope.n_rows
    cols = np.hstack([np.tile(indices, (n_rows, 1)), np.full((n_rows, 1), flag)])
    values = np.hstack([row_values, np.full((n_rows, 1), big_m)])
    rhs = polytope.b + eps + big_m - polytope.A @ constant
    builder.add_rows(cols, values, rhs, Sense.LE)


def segment_constraints_hold(
    starts: np.ndarray,
    ends: np.ndarray,
    polytopes: Sequence[ConvexPolytope],
    n_divisions: int = DEFAULT_DIVISIONS,
    eps: Optional[float] = None,
) -> np.ndarray:
    """
    Evaluate the `segment_constraints` conditions on concrete segments, with every activation binary set to the
    true membership of its point. A segment passes here exactly when its block is satisfiable.

    Returns:
        np.ndarray: One bool per segment.
    """

    eps = resolve_eps(eps)
    starts = np.atleast_2d(np.asarray(starts, dtype=np.float64))
    ends = np.atleast_2d(np.asarray(ends, dtype=np.float64))
    n_segments, dim = starts.shape
    if n_segments == 0:
        return np.zeros(0, dtype=bool)
    eta = np.linspace(0.0, 1.0, n_divisions + 1)
    points = starts[:, None, :] + eta[None, :, None] * (ends - starts)[:, None, :]
    member = np.stack([contains_points(polytope, points.reshape(-1, dim), eps) for polytope in polytopes])
    member = member.reshape(len(polytopes), n_segments, n_divisions + 1)

    n_points = n_divisions + 1
    covered = member.any(axis=0).all(axis=1)
    cond1 = (member[:, :, 0] & member[:, :, -1]).any(axis=0)
    cond2 = np.zeros(n_segments, dtype=bool)
    counts = member.sum(axis=2)
    for i, j in combinations(range(len(polytopes)), 2):
        ends_in_pair = (member[i, :, 0] | member[j, :, 0]) & (member[i, :, -1] | member[j, :, -1])
        cond2 |= ends_in_pair & (counts[i] + counts[j] >= n_points + 1)
    passed = covered & (cond1 | cond2)

    # Coincident endpoints collapse to a single point
    single = np.abs(ends - starts).max(axis=1) <= 1e-12
    passed[single] = member[:, single, 0].any(axis=0)
    return passed
