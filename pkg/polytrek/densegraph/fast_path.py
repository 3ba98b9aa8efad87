from __future__ import annotations

import logging
import math
from typing_extensions import Optional, Sequence

import numpy as np

from ..encode import DEFAULT_DIVISIONS, apex_matrix, segment_constraints_hold
from ..geometry import Configuration, ConvexPolytope, RigidObject, RotationTable
from ..settings import resolve_eps

logger = logging.getLogger(__name__)

_CHUNK = 256
_SAME_POSITION = 1e-9


def single_step_pairs(
    sources: Sequence[Configuration],
    targets: Sequence[Configuration],
    table: RotationTable,
    dtheta_max: float = math.pi / 3.0,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Source/target index pairs one motion step apart (same rotation, or in 2D the same position and an allowed
    rotation step), sorted by translation 1-norm, then source, then target.

    Returns:
        tuple[np.ndarray, np.ndarray, np.ndarray]: Source indices, target indices and costs.
    """

    p_u = np.array([q.p for q in sources])
    p_w = np.array([q.p for q in targets])
    r_u = np.array([q.rot_index for q in sources], dtype=np.int64)
    r_w = np.array([q.rot_index for q in targets], dtype=np.int64)
    cost = np.abs(p_u[:, None, :] - p_w[None, :, :]).sum(axis=2)
    allowed = r_u[:, None] == r_w[None, :]
    if table.dim == 2:
        same_place = np.abs(p_u[:, None, :] - p_w[None, :, :]).max(axis=2) <= _SAME_POSITION
        small_turn = np.abs(table.angle_table[r_u[:, None], r_w[None, :]]) <= dtheta_max + 1e-12
        allowed |= same_place & small_turn
    a, b = np.nonzero(allowed)
    costs = cost[a, b]
    order = np.lexsort((b, a, costs))
    return a[order], b[order], costs[order]


def fast_verify_n0(
    sources: Sequence[Configuration],
    targets: Sequence[Configuration],
    polytopes: Sequence[ConvexPolytope],
    obj: RigidObject,
    table: RotationTable,
    n_divisions: int = DEFAULT_DIVISIONS,
    dtheta_max: float = math.pi / 3.0,
    eps: Optional[float] = None,
) -> Optional[tuple[Configuration, Configuration, float]]:
    """
    Answer a traversal without intermediate waypoints by evaluating the sweep conditions of the single step for
    every source/target pair, cheapest first. The verdict is the one the traversal MILP would reach over the same
    configuration lists, without building it.

    Returns:
        Optional[tuple[Configuration, Configuration, float]]: The cheapest passing pair and its translation cost,
        or None when no pair passes.
    """

    eps = resolve_eps(eps)
    a, b, costs = single_step_pairs(sources, targets, table, dtheta_max)
    if a.shape[0] == 0:
        return None
    p_u = np.array([q.p for q in sources])
    p_w = np.array([q.p for q in targets])
    r_u = np.array([q.rot_index for q in sources], dtype=np.int64)
    r_w = np.array([q.rot_index for q in targets], dtype=np.int64)
    apexes = _apex_table(table) if table.dim == 2 else None

    for first in range(0, a.shape[0], _CHUNK):
        chunk = slice(first, first + _CHUNK)
        ca, cb = a[chunk], b[chunk]
        start = np.einsum("pij,vj->pvi", table.matrices[r_u[ca]], obj.vertices) + p_u[ca][:, None, :]
        end = np.einsum("pij,vj->pvi", table.matrices[r_w[cb]], obj.vertices) + p_w[cb][:, None, :]
        if apexes is None:
            starts, ends = start, end
        else:
            apex = np.einsum("pij,vj->pvi", apexes[r_u[ca], r_w[cb]], obj.vertices) + p_u[ca][:, None, :]
            starts = np.concatenate([start, apex], axis=1)
            ends = np.concatenate([apex, end], axis=1)
        n_pairs, n_segments, dim = starts.shape
        passed = segment_constraints_hold(
            starts.reshape(-1, dim), ends.reshape(-1, dim), polytopes, n_divisions, eps
        ).reshape(n_pairs, n_segments)
        hits = np.flatnonzero(passed.all(axis=1))
        if hits.shape[0]:
            k = first + int(hits[0])
            logger.debug("single-step traversal found after %d of %d pairs", k + 1, a.shape[0])
            return sources[int(a[k])], targets[int(b[k])], float(costs[k])
    return None


def _apex_table(table: RotationTable) -> np.ndarray:
    n_r = table.n_r
    matrices = np.zeros((n_r, n_r, table.dim, table.dim))
    for k in range(n_r):
        for j in range(n_r):
            matrices[k, j] = apex_matrix(table, k, j)
    return matrices
