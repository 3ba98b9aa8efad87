from __future__ import annotations

import json
import logging
import statistics
import time
from itertools import product
from typing_extensions import Callable, Optional

from pydantic import Field

from ..decompose import DecomposeParams, decompose
from ..densegraph import BuildParams, build_dense_graph
from ..errors import PolytrekError
from ..geometry import RigidObject, RotationTable
from ..query import Planner, QueryParams
from ..value_object import ValueObject
from .fixtures import Fixture, bugtrap, stick
from .prm import PrmParams, prm_build, prm_query
from .validate import validate_path

logger = logging.getLogger(__name__)

OURS = "polytrek"


class BenchConfig(ValueObject):
    factors: tuple[float, ...] = (1.0, 2.0)
    "Scene scale factors."

    corridor_shrink: tuple[float, ...] = (1.0, 0.6)
    "Corridor width multipliers; every factor is combined with every multiplier."

    resolutions: tuple[float, ...] = (0.25, 0.1, 0.05)
    "PRM collision-check spacing, as fractions of the object length."

    trials: int = Field(default=5, ge=1)
    prm_samples: int = Field(default=500, ge=1)
    prm_budget: Optional[float] = Field(default=15.0, gt=0.0)
    seed: int = 0
    decompose: DecomposeParams = DecomposeParams()
    build: BuildParams = BuildParams()
    query: QueryParams = QueryParams()


class PlannerResult(ValueObject):
    planner: str
    online_ms: Optional[float] = None
    "Median query time over successful trials."

    success: float = 0.0
    "Fraction of trials that returned a path."

    offline_s: Optional[float] = None
    validated: Optional[bool] = None


class ScalingRow(ValueObject):
    variant: str
    factor: float
    corridor: float
    results: tuple[PlannerResult, ...]


class ScalingTable(ValueObject):
    rows: tuple[ScalingRow, ...] = ()

    @property
    def planners(self) -> list[str]:
        return [result.planner for result in self.rows[0].results] if self.rows else []

    def result(self, variant: str, planner: str) -> PlannerResult:
        row = next(row for row in self.rows if row.variant == variant)
        return next(result for result in row.results if result.planner == planner)

    def to_text(self, delimiter: str = "\t") -> str:
        header = ["variant"] + [f"{planner} {column}" for planner in self.planners for column in ("ms", "success")]
        lines = [delimiter.join(header)]
        for row in self.rows:
            cells = [row.variant]
            for result in row.results:
                cells.append("-" if result.online_ms is None else f"{result.online_ms:.1f}")
                cells.append(f"{result.success:.2f}")
            lines.append(delimiter.join(cells))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True)


def scaling_suite(
    base: Callable[..., Fixture] = bugtrap,
    obj: Optional[RigidObject] = None,
    config: BenchConfig = BenchConfig(),
) -> ScalingTable:
    """
    Time both planners on every scene variant `base(scale=factor, corridor=shrink)`. Our planner builds its roadmap
    once and answers `trials` queries after a discarded warmup; the PRM is rebuilt for each trial with a fresh seed.
    Trials run one after another so timings do not compete.
    """

    obj = obj or stick()
    rows = []
    for factor, shrink in product(config.factors, config.corridor_shrink):
        variant = base(scale=factor, corridor=shrink)
        name = f"x{factor:g} w{shrink:g}"
        logger.info("bench variant %s", name)
        results = [_time_ours(variant, obj, config)]
        results.extend(_time_prm(variant, obj, config, resolution) for resolution in config.resolutions)
        rows.append(ScalingRow(variant=name, factor=factor, corridor=shrink, results=tuple(results)))
    return ScalingTable(rows=tuple(rows))


def _time_ours(variant: Fixture, obj: RigidObject, config: BenchConfig) -> PlannerResult:
    started = time.perf_counter()
    try:
        coarse = decompose(variant.scene, config.decompose.model_copy(update={"seed": config.seed}))
        dense = build_dense_graph(coarse, obj, config.build)
    except PolytrekError as error:
        logger.warning("offline phase failed: %s", error)
        return PlannerResult(planner=OURS)
    offline = time.perf_counter() - started

    planner = Planner(coarse, dense, config.query)
    times, validated = [], True
    for trial in range(config.trials + 1):
        try:
            motion = planner.plan(variant.start, variant.goal)
        except PolytrekError as error:
            logger.info("query failed: %s", error)
            continue
        if trial == 0:
            validated = validate_path(motion, variant.scene, obj, dense.table).passed
            continue
        times.append(planner.last_elapsed_ms)
    return PlannerResult(
        planner=OURS,
        online_ms=statistics.median(times) if times else None,
        success=len(times) / config.trials,
        offline_s=offline,
        validated=validated if times else None,
    )


def _time_prm(variant: Fixture, obj: RigidObject, config: BenchConfig, resolution: float) -> PlannerResult:
    table = RotationTable.for_dimension(obj.dim, config.build.n_r or RotationTable.default_count(obj.dim))
    times, offline = [], []
    for trial in range(config.trials):
        params = PrmParams(
            n_samples=config.prm_samples,
            resolution=resolution,
            time_budget=config.prm_budget,
            seed=config.seed + trial,
        )
        started = time.perf_counter()
        roadmap = prm_build(variant.scene, obj, params, table)
        offline.append(time.perf_counter() - started)
        started = time.perf_counter()
        try:
            prm_query(roadmap, variant.scene, obj, variant.start, variant.goal, table)
        except PolytrekError as error:
            logger.info("PRM trial %d failed: %s", trial, error)
            continue
        times.append((time.perf_counter() - started) * 1e3)
    return PlannerResult(
        planner=f"prm {resolution:g}",
        online_ms=statistics.median(times) if times else None,
        success=len(times) / config.trials,
        offline_s=statistics.median(offline),
    )
