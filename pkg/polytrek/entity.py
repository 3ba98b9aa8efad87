"""
Identity-bearing domain objects. Patches and roadmaps are compared by what they are (their id), never by what they
currently hold.
"""

from __future__ import annotations

import logging
from abc import ABC
from typing import Any  # Cannot be imported from typing_extensions when used in a Pydantic model
from typing_extensions import Annotated, ClassVar, Hashable

from pydantic import BaseModel, ConfigDict, Field
from pydantic.fields import FieldInfo

from .eda import Event, MessageBus

logger = logging.getLogger(__name__)


class Entity(BaseModel, Hashable, ABC):
    """
    A model with an identity. Two entities of the same class are equal, and hash alike, when their ids match,
    whatever their other fields hold. Assignments are re-validated, and the id can never be reassigned.

    Subclasses that narrow the id type keep it frozen with `IdField`:

        ```
        class ConfigPatch(ImmutableEntity):
            id: Annotated[PatchId, ImmutableEntity.IdField]
        ```
    """

    IdField: ClassVar[FieldInfo] = Field(frozen=True)
    "Field annotation for a narrowed, still frozen, id."

    id: Annotated[Any, Entity.IdField]

    model_config = ConfigDict(validate_assignment=True, arbitrary_types_allowed=True)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, type(self)) and self.id == other.id

    def __hash__(self) -> int:
        return hash(self.id)


class ImmutableEntity(Entity, ABC):
    """An entity fixed at construction, such as a configuration patch once its members are grouped."""

    model_config = ConfigDict(frozen=True)


class AggregateRoot(Entity, ABC):
    """
    The consistency boundary of a persisted result. Changes to the aggregate go through its own methods, which
    announce them with `record`.
    """

    def record(self, event: Event) -> None:
        """Publish `event` on the current thread's MessageBus on behalf of this aggregate."""

        logger.debug("%s %s: %s", type(self).__name__, self.id, event.describe())
        MessageBus().publish(event)
