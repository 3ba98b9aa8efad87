import logging
from typing_extensions import Optional

from .events import CoverageMeasured, TraversalCertified, TraversalInfeasible, TraversalUnverified
from .message import Event
from .message_bus import MessageBus, Subscriber

# Per-candidate and per-iteration chatter stays at DEBUG, phase boundaries at INFO
_DEBUG_EVENTS = (CoverageMeasured, TraversalCertified, TraversalInfeasible)


class LoggingSubscriber:
    """
    Turns every planner Event published on the current thread's MessageBus into a log line.

    Example:
        ```
        with LoggingSubscriber().attached():
            decompose(scene, DecomposeParams())
        ```
    """

    def __init__(self, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger("polytrek.events")
        self.subscriber = Subscriber[Event](self.on_event)

    def on_event(self, event: Event) -> None:
        if isinstance(event, TraversalUnverified):
            level = logging.WARNING
        elif isinstance(event, _DEBUG_EVENTS):
            level = logging.DEBUG
        else:
            level = logging.INFO
        self.logger.log(level, event.describe())

    def attach(self) -> "LoggingSubscriber":
        MessageBus().subscribe(self.subscriber)
        return self

    def detach(self) -> None:
        MessageBus().unsubscribe(self.subscriber)

    def attached(self) -> "_Attached":
        return _Attached(self)


class _Attached:
    def __init__(self, owner: LoggingSubscriber):
        self.owner = owner

    def __enter__(self) -> LoggingSubscriber:
        return self.owner.attach()

    def __exit__(self, exc_type, exc_value, traceback) -> None:
        self.owner.detach()
