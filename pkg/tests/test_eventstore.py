"""Event store: append with optimistic concurrency, ordered publication,
reads, reset, the file-backed variant, and the command bus."""

from __future__ import annotations

import struct
from datetime import datetime

import pytest
from hypothesis import given
from hypothesis import strategies as st

from swapsim.errors import AlreadyExists, ConcurrencyConflict, UnroutableCommand
from swapsim.events import (
    ClockAdvanced,
    ClockCreated,
    ExecutionOccurred,
    TradeMatured,
    TradeRejected,
)
from swapsim.eventstore import (
    CommandBus,
    CommandEnvelope,
    EventEnvelope,
    FileEventStore,
    InMemoryEventStore,
    SubscriptionFilter,
    encode_record,
)
from swapsim.lifecycle import create_execution_event
from swapsim.serialization import canonical_dumpb

from conftest import make_irs_trade

T0 = datetime(2024, 1, 10)


def rejected(n: int = 0) -> TradeRejected:
    return TradeRejected(trade_id=f"T{n}")


class TestAppend:
    def test_versions_are_contiguous_from_one(self):
        store = InMemoryEventStore()
        envelopes = store.append("trade.T1", 0, [rejected(), rejected()], T0)
        assert [e.aggregate_version for e in envelopes] == [1, 2]
        assert [e.global_sequence for e in envelopes] == [1, 2]
        assert store.stream_version("trade.T1") == 2

    def test_stale_expected_version_conflicts_and_leaves_store_unchanged(self):
        store = InMemoryEventStore()
        store.append("trade.T1", 0, [rejected()], T0)
        with pytest.raises(ConcurrencyConflict):
            store.append("trade.T1", 0, [rejected()], T0)
        assert store.stream_version("trade.T1") == 1
        assert store.last_sequence() == 1

    def test_none_expected_version_skips_the_check(self):
        store = InMemoryEventStore()
        store.append("trade.T1", 0, [rejected()], T0)
        envelopes = store.append("trade.T1", None, [rejected()], T0)
        assert envelopes[0].aggregate_version == 2

    def test_global_sequence_spans_streams(self):
        store = InMemoryEventStore()
        store.append("a", 0, [rejected()], T0)
        store.append("b", 0, [rejected()], T0)
        store.append("a", 1, [rejected()], T0)
        sequences = [e.global_sequence for e in store.read_all()]
        assert sequences == [1, 2, 3]
        assert [e.aggregate_version for e in store.read_stream("a")] == [1, 2]

    def test_empty_batch_is_a_noop(self):
        store = InMemoryEventStore()
        assert store.append("a", 0, [], T0) == []
        assert store.last_sequence() == 0

    @given(st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=12))
    def test_stream_versions_always_contiguous(self, batch_sizes):
        store = InMemoryEventStore()
        expected = 0
        for size in batch_sizes:
            store.append("s", expected, [rejected() for _ in range(size)], T0)
            expected += size
        versions = [e.aggregate_version for e in store.read_stream("s")]
        assert versions == list(range(1, expected + 1))


class TestReads:
    def test_read_all_window(self):
        store = InMemoryEventStore()
        for i in range(100):
            store.append(f"s{i}", 0, [rejected(i)], T0)
        window = store.read_all(from_global_sequence=76, limit=25)
        assert len(window) == 25
        assert window[0].global_sequence == 76
        assert window[-1].global_sequence == 100

    def test_read_all_limit_zero_and_past_end(self):
        store = InMemoryEventStore()
        store.append("s", 0, [rejected()], T0)
        assert store.read_all(limit=0) == []
        assert store.read_all(from_global_sequence=2) == []

    def test_read_stream_from_version(self):
        store = InMemoryEventStore()
        store.append("s", 0, [rejected(i) for i in range(5)], T0)
        tail = store.read_stream("s", from_version=4)
        assert [e.aggregate_version for e in tail] == [4, 5]

    def test_read_all_filter(self):
        store = InMemoryEventStore()
        execution = ExecutionOccurred(
            business_event=create_execution_event(make_irs_trade(), T0)
        )
        store.append("trade.T1", 0, [execution, TradeMatured(trade_id="T1")], T0)
        cdm = store.read_all(event_filter=SubscriptionFilter(cdm_only=True))
        assert [e.event_type for e in cdm] == ["ExecutionOccurred"]
        named = store.read_all(
            event_filter=SubscriptionFilter(event_types=frozenset({"TradeMatured"}))
        )
        assert [e.event_type for e in named] == ["TradeMatured"]

    def test_replay_aggregate_folds_in_order(self):
        store = InMemoryEventStore()
        store.append("s", 0, [rejected(i) for i in range(4)], T0)
        out = store.replay_aggregate(
            "s", lambda acc, envelope: (acc or []) + [envelope.aggregate_version]
        )
        assert out == [1, 2, 3, 4]


class TestSubscriptions:
    def test_listener_receives_matching_events_in_order(self):
        store = InMemoryEventStore()
        seen: list[int] = []
        store.subscribe(SubscriptionFilter(), lambda e: seen.append(e.global_sequence))
        store.append("a", 0, [rejected(), rejected()], T0)
        store.append("b", 0, [rejected()], T0)
        assert seen == [1, 2, 3]

    def test_filter_by_type_and_cdm(self):
        store = InMemoryEventStore()
        cdm_seen: list[str] = []
        typed_seen: list[str] = []
        store.subscribe(
            SubscriptionFilter(cdm_only=True), lambda e: cdm_seen.append(e.event_type)
        )
        store.subscribe(
            SubscriptionFilter(event_types=frozenset({"ClockCreated"})),
            lambda e: typed_seen.append(e.event_type),
        )
        execution = ExecutionOccurred(
            business_event=create_execution_event(make_irs_trade(), T0)
        )
        store.append("trade.T1", 0, [execution], T0)
        store.append("clock", 0, [ClockCreated(clock_id="c", initial_time=T0)], T0)
        assert cdm_seen == ["ExecutionOccurred"]
        assert typed_seen == ["ClockCreated"]

    def test_unsubscribe_stops_delivery(self):
        store = InMemoryEventStore()
        seen: list[int] = []
        sub = store.subscribe(SubscriptionFilter(), lambda e: seen.append(e.global_sequence))
        store.append("a", 0, [rejected()], T0)
        store.unsubscribe(sub)
        store.append("a", 1, [rejected()], T0)
        assert seen == [1]

    def test_nested_appends_observed_in_global_order_by_everyone(self):
        # A listener that reacts to an event by appending more events must not
        # cause any other listener to see the log out of order.
        store = InMemoryEventStore()

        def reactor(envelope: EventEnvelope) -> None:
            if envelope.event_type == "ClockCreated":
                store.append("reactions", 0, [rejected(1)], T0)

        orders: list[list[int]] = [[], []]
        store.subscribe(SubscriptionFilter(), lambda e: orders[0].append(e.global_sequence))
        store.subscribe(SubscriptionFilter(), reactor)
        store.subscribe(SubscriptionFilter(), lambda e: orders[1].append(e.global_sequence))

        store.append("clock", 0, [ClockCreated(clock_id="c", initial_time=T0)], T0)
        assert orders[0] == [1, 2]
        assert orders[1] == [1, 2]

    def test_reset_restarts_sequence_but_keeps_subscriptions(self):
        store = InMemoryEventStore()
        seen: list[int] = []
        store.subscribe(SubscriptionFilter(), lambda e: seen.append(e.global_sequence))
        store.append("a", 0, [rejected()], T0)
        store.reset()
        assert store.last_sequence() == 0
        assert store.read_all() == []
        store.append("a", 0, [rejected()], T0)
        assert seen == [1, 1]
        assert store.read_all()[0].global_sequence == 1


class TestEnvelopeSerialization:
    def test_round_trip(self):
        store = InMemoryEventStore()
        envelope = store.append(
            "clock", 0, [ClockAdvanced(clock_id="c", time=T0)], T0
        )[0]
        assert EventEnvelope.from_json(envelope.to_json()) == envelope

    def test_decode_returns_typed_event(self):
        store = InMemoryEventStore()
        envelope = store.append("trade.T1", 0, [rejected()], T0)[0]
        event = envelope.decode()
        assert isinstance(event, TradeRejected)
        assert event.trade_id == "T0"

    def test_record_encoding_is_length_prefixed_canonical_json(self):
        store = InMemoryEventStore()
        envelope = store.append("trade.T1", 0, [rejected()], T0)[0]
        record = encode_record(envelope)
        (length,) = struct.unpack(">I", record[:4])
        body = record[4:]
        assert len(body) == length
        assert body == canonical_dumpb(envelope.to_json())


class TestFileStore:
    def test_survives_reopen(self, tmp_path):
        path = tmp_path / "events.log"
        store = FileEventStore(path)
        store.append("a", 0, [rejected(), rejected()], T0)
        store.append("b", 0, [ClockCreated(clock_id="c", initial_time=T0)], T0)
        before = [e.to_json() for e in store.read_all()]
        store.close()

        reopened = FileEventStore(path)
        after = [e.to_json() for e in reopened.read_all()]
        assert after == before
        assert reopened.last_sequence() == 3
        assert reopened.stream_version("a") == 2
        reopened.close()

    def test_appends_continue_numbering_after_reopen(self, tmp_path):
        path = tmp_path / "events.log"
        store = FileEventStore(path)
        store.append("a", 0, [rejected()], T0)
        store.close()
        reopened = FileEventStore(path)
        envelope = reopened.append("a", 1, [rejected()], T0)[0]
        assert envelope.global_sequence == 2
        assert envelope.aggregate_version == 2
        reopened.close()

    def test_reset_truncates_file(self, tmp_path):
        path = tmp_path / "events.log"
        store = FileEventStore(path)
        store.append("a", 0, [rejected()], T0)
        store.reset()
        store.append("a", 0, [rejected()], T0)
        store.close()
        reopened = FileEventStore(path)
        assert reopened.last_sequence() == 1
        reopened.close()

    def test_rejects_unknown_header_version(self, tmp_path):
        path = tmp_path / "events.log"
        body = canonical_dumpb({"formatVersion": "999"})
        path.write_bytes(struct.pack(">I", len(body)) + body)
        with pytest.raises(ValueError):
            FileEventStore(path)

    def test_identical_appends_yield_identical_bytes(self, tmp_path):
        paths = [tmp_path / "one.log", tmp_path / "two.log"]
        for path in paths:
            store = FileEventStore(path)
            store.append("a", 0, [rejected(), rejected(1)], T0)
            store.close()
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestCommandBus:
    def test_routes_to_registered_handler(self):
        bus = CommandBus()
        handled: list[str] = []

        def handler(command: CommandEnvelope):
            handled.append(command.command_id)
            return []

        bus.register("DoThing", handler)
        bus.dispatch(
            CommandEnvelope(
                command_id="cmd-1",
                command_type="DoThing",
                target_aggregate_id="a",
                payload={},
            )
        )
        assert handled == ["cmd-1"]

    def test_duplicate_registration_rejected(self):
        bus = CommandBus()
        bus.register("DoThing", lambda c: [])
        with pytest.raises(AlreadyExists):
            bus.register("DoThing", lambda c: [])

    def test_unroutable_command_rejected(self):
        bus = CommandBus()
        with pytest.raises(UnroutableCommand):
            bus.dispatch(
                CommandEnvelope(
                    command_id="cmd-1",
                    command_type="Nope",
                    target_aggregate_id="a",
                    payload={},
                )
            )
