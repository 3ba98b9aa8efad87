from .events import (
    CoverageMeasured,
    DecompositionFinished,
    DecompositionStarted,
    DenseGraphBuilt,
    DenseGraphStored,
    PatchesGrouped,
    PlanFound,
    PolytopeAdded,
    QueryAttached,
    TraversalCertified,
    TraversalInfeasible,
    TraversalUnverified,
)
from .logging_subscriber import LoggingSubscriber
from .message import Command, Event, Message
from .message_bus import MessageBus, Subscriber

__all__ = [
    "Command",
    "CoverageMeasured",
    "DecompositionFinished",
    "DecompositionStarted",
    "DenseGraphBuilt",
    "DenseGraphStored",
    "Event",
    "LoggingSubscriber",
    "Message",
    "MessageBus",
    "PatchesGrouped",
    "PlanFound",
    "PolytopeAdded",
    "QueryAttached",
    "Subscriber",
    "TraversalCertified",
    "TraversalInfeasible",
    "TraversalUnverified",
]
