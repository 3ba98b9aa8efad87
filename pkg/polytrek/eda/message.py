from abc import ABC
from datetime import datetime, timezone

from pydantic import Field

from ..value_object import ValueObject


class Message(ValueObject, ABC):
    """Something carried by the MessageBus. Derive from Event or Command, not from this class."""

    ...


class Command(Message, ABC):
    """A validated request to run one planner phase, such as a command-line invocation with its parameters."""

    ...


class Event(Message, ABC):
    """Progress reported by a long-running phase: a polytope added, a traversal certified, a plan found."""

    occurred_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    "UTC time of creation. Two events are therefore never equal, so compare their fields."

    def describe(self) -> str:
        """A one-line summary without the timestamp, used for log lines."""

        fields = ", ".join(f"{name}={getattr(self, name)}" for name in type(self).model_fields if name != "occurred_at")
        return f"{type(self).__name__}({fields})"
