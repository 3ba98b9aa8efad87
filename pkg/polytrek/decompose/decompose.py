from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing_extensions import Optional

import numpy as np
from pydantic import Field

from ..eda import CoverageMeasured, DecompositionFinished, DecompositionStarted, MessageBus, PolytopeAdded
from ..errors import CoverageStall, NoUncoveredEdges, SeedInObstacle
from ..geometry import ConvexPolytope, Scene
from ..settings import get_settings, resolve_eps
from ..value_object import ValueObject
from .coarse_graph import CoarseGraph, construct_coarse_graph
from .coverage import CoverageTracker
from .inflate import InflationParams, inflate_region
from .visibility import DEFAULT_RADIUS_FRACTION, sample_visibility_graph

logger = logging.getLogger(__name__)


class DecomposeParams(ValueObject):
    n_v: int = Field(default=512, gt=0)
    "Visibility sample count."

    n_s: int = Field(default=5, gt=0)
    "Seeds inflated per iteration."

    alpha: float = Field(default=0.95, ge=0.0, le=1.0)
    "Target length-weighted coverage of the visibility edges."

    radius_fraction: float = Field(default=DEFAULT_RADIUS_FRACTION, gt=0.0)
    "Visibility connection radius as a fraction of the scene diagonal."

    seed: int = 0

    stall_window: int = Field(default=50, ge=1)
    "Consecutive low-gain iterations tolerated before giving up."

    stall_gain: float = Field(default=1e-4, ge=0.0)

    max_iterations: int = Field(default=10_000, ge=1)

    inflation: InflationParams = InflationParams()


def decompose(scene: Scene, params: DecomposeParams = DecomposeParams(), eps: Optional[float] = None) -> CoarseGraph:
    """
    Cover the free workspace with convex polytopes until they cover `alpha` of the visibility-edge length, then
    connect overlapping polytopes.

    Each iteration draws `n_s` seeds on uncovered edge portions, inflates them concurrently and merges the regions in
    seed order, dropping any region already contained in an earlier one.

    Raises:
        SamplingExhausted: The scene has too little free space to sample.
        CoverageStall: Coverage gained less than `stall_gain` for `stall_window` consecutive iterations.
    """

    eps = resolve_eps(eps)
    bus = MessageBus()
    bus.publish(DecompositionStarted(n_v=params.n_v, alpha=params.alpha, seed=params.seed))
    if params.alpha <= 0.0:
        graph = construct_coarse_graph([], scene, eps, coverage=0.0, iterations=0)
        bus.publish(DecompositionFinished(polytopes=0, edges=0, coverage=0.0, iterations=0))
        return graph

    visibility = sample_visibility_graph(
        scene, params.n_v, params.radius_fraction * scene.diagonal, seed=params.seed, eps=eps
    )
    tracker = CoverageTracker(visibility, eps=eps)
    rng = np.random.default_rng(params.seed + 1)
    polytopes: list[ConvexPolytope] = []
    iteration = 0
    stalled = 0

    with ThreadPoolExecutor(max_workers=get_settings().jobs) as pool:
        while tracker.coverage < params.alpha and iteration < params.max_iterations:
            iteration += 1
            before = tracker.coverage
            try:
                seeds = tracker.sample(params.n_s, rng)
            except NoUncoveredEdges:
                break
            regions = list(pool.map(lambda seed: _inflate_or_none(seed, scene, params.inflation, eps), seeds))
            for region in regions:
                if region is None or any(existing.contains_polytope(region, eps) for existing in polytopes):
                    continue
                polytopes.append(region)
                tracker.add(region)
                bus.publish(PolytopeAdded(index=len(polytopes) - 1, rows=region.n_rows, radius=region.chebyshev[1]))
            coverage = tracker.coverage
            bus.publish(CoverageMeasured(iteration=iteration, coverage=coverage, polytopes=len(polytopes)))
            stalled = stalled + 1 if coverage - before < params.stall_gain else 0
            if stalled >= params.stall_window:
                raise CoverageStall(
                    f"coverage stuck at {coverage:.4f} for {stalled} iterations (target {params.alpha})"
                )

    graph = construct_coarse_graph(polytopes, scene, eps, coverage=tracker.coverage, iterations=iteration)
    bus.publish(
        DecompositionFinished(
            polytopes=graph.n_polytopes, edges=len(graph.intersections), coverage=graph.coverage, iterations=iteration
        )
    )
    return graph


def _inflate_or_none(
    seed: np.ndarray, scene: Scene, params: InflationParams, eps: float
) -> Optional[ConvexPolytope]:
    try:
        return inflate_region(seed, scene, params, eps)
    except SeedInObstacle:
        logger.debug("seed %s touches an obstacle, skipped", seed.tolist())
        return None
