from __future__ import annotations

import logging
from typing_extensions import Annotated, Optional

from pydantic import Field

from .decompose import CoarseGraph, DecomposeParams
from .densegraph import DenseGraph
from .eda import DenseGraphStored
from .entity import AggregateRoot
from .errors import FingerprintCollision, InvalidQuery
from .geometry import RigidObject, SceneFingerprint

logger = logging.getLogger(__name__)


class Roadmap(AggregateRoot):
    """
    The persisted offline result for one scene: its coarse graph and one dense graph per object, keyed by object
    fingerprint. The coarse graph is shared by every object.
    """

    id: Annotated[SceneFingerprint, AggregateRoot.IdField]
    coarse: CoarseGraph
    decompose_params: DecomposeParams = DecomposeParams()
    dense: dict[str, DenseGraph] = Field(default_factory=dict)

    @classmethod
    def create(cls, coarse: CoarseGraph, params: Optional[DecomposeParams] = None) -> Roadmap:
        return cls(id=coarse.scene.fingerprint(), coarse=coarse, decompose_params=params or DecomposeParams())

    def has_dense(self, obj: RigidObject) -> bool:
        return obj.fingerprint().root in self.dense

    def dense_for(self, obj: RigidObject) -> DenseGraph:
        """
        Raises:
            InvalidQuery: No dense graph was built for this object.
            FingerprintCollision: The stored graph has the object's fingerprint but other geometry.
        """

        key = obj.fingerprint().root
        if key not in self.dense:
            raise InvalidQuery(f"the roadmap has no dense graph for object {key[:12]}; run `polytrek build` first")
        graph = self.dense[key]
        if graph.obj != obj:
            raise FingerprintCollision(f"object {key[:12]} is stored with different edges or faces")
        return graph

    def add_dense(self, graph: DenseGraph) -> None:
        """
        Store `graph` under its object's fingerprint, replacing an earlier graph of the same object.

        Raises:
            FingerprintCollision: A graph with the same fingerprint but different object geometry is stored.
        """

        key = graph.fingerprint.root
        stored = self.dense.get(key)
        if stored is not None and stored.obj != graph.obj:
            raise FingerprintCollision(f"object {key[:12]} is already stored with different geometry")
        if stored is not None:
            logger.info("replacing dense graph of object %s", key[:12])
        self.dense = {**self.dense, key: graph}
        self.record(DenseGraphStored(obj=key, edges=len(graph.edges), replaced=stored is not None))
