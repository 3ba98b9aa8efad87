from .decompose import CoarseGraph, DecomposeParams, decompose
from .densegraph import BuildParams, DenseGraph, build_dense_graph
from .eda import Command, Event, LoggingSubscriber, Message, MessageBus, Subscriber
from .entity import AggregateRoot, Entity, ImmutableEntity
from .errors import PolytrekError
from .geometry import Configuration, ConvexPolytope, RigidObject, RotationTable, Scene
from .motion import MotionKind, MotionPlan, PlanSegment
from .query import Planner, QueryParams, plan
from .roadmap import Roadmap
from .settings import PlannerSettings, configure, get_settings, override
from .value import Value
from .value_object import FloatArray, IntArray, ValueObject

__all__ = [
    "AggregateRoot",
    "BuildParams",
    "CoarseGraph",
    "Command",
    "Configuration",
    "ConvexPolytope",
    "DecomposeParams",
    "DenseGraph",
    "Entity",
    "Event",
    "FloatArray",
    "ImmutableEntity",
    "IntArray",
    "LoggingSubscriber",
    "Message",
    "MessageBus",
    "MotionKind",
    "MotionPlan",
    "PlanSegment",
    "Planner",
    "PlannerSettings",
    "PolytrekError",
    "QueryParams",
    "RigidObject",
    "Roadmap",
    "RotationTable",
    "Scene",
    "Subscriber",
    "Value",
    "ValueObject",
    "build_dense_graph",
    "configure",
    "decompose",
    "get_settings",
    "override",
    "plan",
]
