from typing_extensions import Optional

from .message import Event

# decompose


class DecompositionStarted(Event):
    n_v: int
    alpha: float
    seed: int


class PolytopeAdded(Event):
    index: int
    rows: int
    radius: float


class CoverageMeasured(Event):
    iteration: int
    coverage: float
    polytopes: int


class DecompositionFinished(Event):
    polytopes: int
    edges: int
    coverage: float
    iterations: int


# densegraph


class PatchesGrouped(Event):
    edge: tuple[int, int]
    free_configs: int
    patches: int


class TraversalCertified(Event):
    source: str
    target: str
    waypoints: int
    cost: float
    fast_path: bool


class TraversalInfeasible(Event):
    source: str
    target: str
    pruned: bool = False


class TraversalUnverified(Event):
    source: str
    target: str
    nodes: int


class DenseGraphBuilt(Event):
    patches: int
    problems: int
    certified: int
    infeasible: int
    unverified: int


# query


class QueryAttached(Event):
    role: str
    attachments: int


class PlanFound(Event):
    segments: int
    waypoints: int
    cost: float
    elapsed_ms: Optional[float] = None


# roadmap


class DenseGraphStored(Event):
    obj: str
    edges: int
    replaced: bool
