import unittest
from unittest.mock import MagicMock

from polytrek.eda import Event, MessageBus, PolytopeAdded, Subscriber, TraversalCertified
from polytrek.errors import SubscriberError


def polytope_added(index: int = 0) -> PolytopeAdded:
    return PolytopeAdded(index=index, rows=4, radius=0.5)


def traversal_certified() -> TraversalCertified:
    return TraversalCertified(source="(0, 1, 0)", target="(0, 1, 1)", waypoints=2, cost=1.5, fast_path=False)


class MessageBusTests(unittest.TestCase):
    def tearDown(self):
        MessageBus().reset()

    def test_should_receive_subscribed_event(self):
        # Given
        mock_subscriber = MagicMock()

        with MessageBus().subscribe(Subscriber[PolytopeAdded](mock_subscriber.on_polytope_added)):

            # When
            MessageBus().publish(polytope_added())

        # Expect
        mock_subscriber.on_polytope_added.assert_called_once()

    def test_should_receive_all_events_derived_from_subscribed_base_event(self):
        # Given
        mock_subscriber = MagicMock()

        with MessageBus().subscribe(Subscriber[Event](mock_subscriber.on_any_event)):

            # When
            MessageBus().publish(polytope_added())
            MessageBus().publish(traversal_certified())

        # Expect
        self.assertEqual(2, mock_subscriber.on_any_event.call_count)

    def test_should_not_receive_events_not_subscribed_to(self):
        # Given
        mock_subscriber = MagicMock()

        with MessageBus().subscribe(Subscriber[PolytopeAdded](mock_subscriber.on_polytope_added)):

            # When
            MessageBus().publish(traversal_certified())

        # Expect
        mock_subscriber.on_polytope_added.assert_not_called()

    def test_should_raise_if_subscription_missing_generic_param_for_event_type(self):
        # Given
        mock_subscriber = MagicMock()

        with MessageBus().subscribe(Subscriber(mock_subscriber.on_any_event)):

            # Expect
            with self.assertRaises(SubscriberError):
                MessageBus().publish(polytope_added())

    def test_reset_should_clear_subscribers(self):
        # Given
        mock_subscriber = MagicMock()

        MessageBus().subscribe(
            Subscriber[PolytopeAdded](mock_subscriber.on_polytope_added),
            Subscriber[TraversalCertified](mock_subscriber.on_traversal_certified),
        )

        MessageBus().publish(polytope_added())

        # When
        MessageBus().reset()
        MessageBus().publish(traversal_certified())

        # Expect
        mock_subscriber.on_polytope_added.assert_called_once()
        mock_subscriber.on_traversal_certified.assert_not_called()

    def test_should_clear_subscribers_on_exiting_with_block(self):
        # Given
        mock_subscriber = MagicMock()

        with MessageBus().subscribe(
            Subscriber[PolytopeAdded](mock_subscriber.on_polytope_added),
            Subscriber[TraversalCertified](mock_subscriber.on_traversal_certified),
        ):
            MessageBus().publish(polytope_added())

        # When
        MessageBus().publish(traversal_certified())

        # Expect
        mock_subscriber.on_polytope_added.assert_called_once()
        mock_subscriber.on_traversal_certified.assert_not_called()

    def test_events_published_by_a_handler_are_delivered_after_the_current_one(self):
        # Given
        received = []

        def on_polytope_added(event: PolytopeAdded) -> None:
            received.append(event.index)
            if event.index == 0:
                MessageBus().publish(polytope_added(index=1))
            received.append(-event.index - 1)

        with MessageBus().subscribe(Subscriber[PolytopeAdded](on_polytope_added)):

            # When
            MessageBus().publish(polytope_added(index=0))

        # Expect
        self.assertEqual([0, -1, 1, -2], received)

    def test_unsubscribe_should_leave_other_subscribers(self):
        # Given
        mock_subscriber = MagicMock()
        added = Subscriber[PolytopeAdded](mock_subscriber.on_polytope_added)
        certified = Subscriber[TraversalCertified](mock_subscriber.on_traversal_certified)

        with MessageBus().subscribe(added, certified):

            # When
            MessageBus().unsubscribe(added)
            MessageBus().publish(polytope_added())
            MessageBus().publish(traversal_certified())

        # Expect
        mock_subscriber.on_polytope_added.assert_not_called()
        mock_subscriber.on_traversal_certified.assert_called_once()
