import threading
from collections import deque
from typing_extensions import Callable, Self, TypeVar

from ..errors import SubscriberError
from ..value import Value
from .message import Message

TMessage = TypeVar("TMessage", bound=Message)


class Subscriber(Value[Callable[[TMessage], None]]):
    """
    A handler bound to the Message type given as its generic parameter, and to every subtype of it.

        ```
        costs = []
        with MessageBus().subscribe(Subscriber[TraversalCertified](lambda event: costs.append(event.cost))):
            build_dense_graph(coarse, obj, BuildParams())
        ```
    """

    def handles(self, message: Message) -> bool:
        """
        Raises:
            SubscriberError: The Subscriber was created without a generic Message type.
        """

        args = getattr(self, "__pydantic_generic_metadata__", {}).get("args")
        if not args:
            raise SubscriberError(f"Subscriber {self} is missing a generic type annotation for the message it handles.")
        return isinstance(message, args)

    def _handle(self, message: TMessage) -> None:
        self.root(message)


class MessageBus:
    """
    A thread-local Message Bus for publishing and subscribing to planner Messages. All instances created on the
    same thread share the same subscribers; worker threads see an empty bus, so long-running phases publish only
    from the coordinating thread.

    Messages published by a handler while another message is being delivered are queued and delivered, in order,
    once the current delivery finishes.

    Example:
        ```
        def on_polytope_added(event: PolytopeAdded) -> None:
            print(f"Polytope {event.index} added, coverage {event.coverage:.3f}")

        with MessageBus().subscribe(Subscriber[PolytopeAdded](on_polytope_added)):
            decompose(scene, DecomposeParams())
        ```
    """

    __local = threading.local()

    @property
    def __subscribers(self) -> list[Subscriber]:
        if not hasattr(self.__local, "subscribers"):
            self.__local.subscribers = []
        return self.__local.subscribers

    @property
    def __pending(self) -> deque[Message]:
        if not hasattr(self.__local, "pending"):
            self.__local.pending = deque()
        return self.__local.pending

    @property
    def __publishing(self) -> bool:
        if not hasattr(self.__local, "publishing"):
            self.__local.publishing = False
        return self.__local.publishing

    @__publishing.setter
    def __publishing(self, value: bool) -> None:
        self.__local.publishing = value

    def publish(self, message: Message) -> None:
        """
        Publish a message to the bus.

        Args:
            message (Message): A subclass of Event or Command to publish for subscribers to handle.

        Raises:
            SubscriberError: Occurs if a subscriber without a generic message type is found.
        """

        self.__pending.append(message)
        if self.__publishing:
            return

        try:
            self.__publishing = True
            while self.__pending:
                self.__deliver(self.__pending.popleft())
        finally:
            self.__pending.clear()
            self.__publishing = False

    def __deliver(self, message: Message) -> None:
        for subscriber in list(self.__subscribers):
            if subscriber.handles(message):
                subscriber._handle(message)

    def subscribe(self, *subscriber: Subscriber) -> Self:
        """
        Subscribe to messages published to the bus.

        Example:
            MessageBus().subscribe(
                Subscriber[PolytopeAdded](self.__on_polytope_added),
                Subscriber[TraversalCertified](self.__on_traversal_certified),
            )

        Returns:
            Self: Returns the instance of the MessageBus to allow for chaining.
        """

        if not self.__publishing:
            self.__subscribers.extend(subscriber)
        return self

    def unsubscribe(self, *subscriber: Subscriber) -> Self:
        """
        Remove previously subscribed handlers, leaving every other subscriber in place.

        Returns:
            Self: Returns the instance of the MessageBus to allow for chaining.
        """

        if not self.__publishing:
            for item in subscriber:
                if item in self.__subscribers:
                    self.__subscribers.remove(item)
        return self

    def reset(self) -> Self:
        """
        Clears all subscribers from the bus.

        Returns:
            Self: Returns the instance of the MessageBus to allow for chaining.
        """

        if not self.__publishing:
            self.__subscribers.clear()
        return self

    def __enter__(self) -> Self:
        return self

    def __exit__(self, exc_type, exc_value, traceback) -> None:
        self.reset()
