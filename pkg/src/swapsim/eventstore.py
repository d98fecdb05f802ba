"""Authoritative event store plus the two message buses.

The store is the single source of truth: an append-only, globally sequenced
log partitioned into per-aggregate streams, with optimistic concurrency on
append. Everything else in the system is a fold over this log.

Publication uses a delivery pump: appends enqueue their envelopes and, if no
dispatch is already in progress on this thread of control, drain the queue in
global-sequence order. An append performed *inside* a subscriber callback only
enqueues; the outer drain picks the new envelopes up after the current batch.
Every listener therefore observes envelopes in exactly global-sequence order,
and by the time a top-level append returns, all transitively provoked
deliveries have completed.

``FileEventStore`` adds write-through durability: each committed envelope is
appended to a binary log of length-prefixed canonical JSON records before
publication. Reopening the file reproduces the exact store contents.
"""

from __future__ import annotations

import struct
import threading
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

from .errors import AlreadyExists, ConcurrencyConflict, UnroutableCommand
from .events import SimulatorEvent, decode_event
from .serialization import canonical_dumps, parse_datetime


@dataclass(frozen=True)
class EventEnvelope:
    """One committed event: payload plus store-assigned position metadata."""

    global_sequence: int
    aggregate_id: str
    aggregate_version: int
    event_type: str
    simulation_time: datetime
    is_cdm_event: bool
    payload: dict

    def decode(self) -> SimulatorEvent:
        return decode_event(self.event_type, self.payload)

    def to_json(self) -> dict:
        return {
            "globalSequence": self.global_sequence,
            "aggregateId": self.aggregate_id,
            "aggregateVersion": self.aggregate_version,
            "eventType": self.event_type,
            "simulationTime": self.simulation_time.isoformat(),
            "isCdmEvent": self.is_cdm_event,
            "payload": self.payload,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EventEnvelope":
        return cls(
            global_sequence=obj["globalSequence"],
            aggregate_id=obj["aggregateId"],
            aggregate_version=obj["aggregateVersion"],
            event_type=obj["eventType"],
            simulation_time=parse_datetime(obj["simulationTime"], "simulationTime"),
            is_cdm_event=obj["isCdmEvent"],
            payload=obj["payload"],
        )


@dataclass(frozen=True)
class SubscriptionFilter:
    """Server-side filter applied before delivery. Empty filter matches all."""

    event_types: frozenset[str] | None = None
    cdm_only: bool = False

    def matches(self, envelope: EventEnvelope) -> bool:
        if self.cdm_only and not envelope.is_cdm_event:
            return False
        if self.event_types is not None and envelope.event_type not in self.event_types:
            return False
        return True


Listener = Callable[[EventEnvelope], None]


class InMemoryEventStore:
    """Append-only event store with publish-subscribe delivery."""

    def __init__(self) -> None:
        self._lock = threading.RLock()
        self._envelopes: list[EventEnvelope] = []
        self._streams: dict[str, list[EventEnvelope]] = {}
        self._subscriptions: dict[str, tuple[SubscriptionFilter, Listener]] = {}
        self._subscription_order: list[str] = []
        self._next_subscription = 1
        self._queue: deque[EventEnvelope] = deque()
        self._dispatching = False

    # -- write side ---------------------------------------------------------

    def append(
        self,
        aggregate_id: str,
        expected_version: int | None,
        events: Sequence[Any],
        simulation_time: datetime,
    ) -> list[EventEnvelope]:
        """Atomically append events to one aggregate's stream.

        ``expected_version`` of None skips the concurrency check; otherwise it
        must equal the stream's current length or nothing is persisted.
        """
        if not events:
            return []
        with self._lock:
            stream = self._streams.setdefault(aggregate_id, [])
            current_version = len(stream)
            if expected_version is not None and expected_version != current_version:
                raise ConcurrencyConflict(
                    f"aggregate {aggregate_id!r} is at version {current_version}, "
                    f"expected {expected_version}",
                    details={
                        "aggregateId": aggregate_id,
                        "currentVersion": current_version,
                        "expectedVersion": expected_version,
                    },
                )
            envelopes = []
            sequence = len(self._envelopes)
            for offset, event in enumerate(events):
                envelopes.append(
                    EventEnvelope(
                        global_sequence=sequence + offset + 1,
                        aggregate_id=aggregate_id,
                        aggregate_version=current_version + offset + 1,
                        event_type=type(event).EVENT_TYPE,
                        simulation_time=simulation_time,
                        is_cdm_event=type(event).IS_CDM,
                        payload=event.to_payload(),
                    )
                )
            # Commit point: no exceptions past here.
            self._envelopes.extend(envelopes)
            stream.extend(envelopes)
            self._persist(envelopes)
            self._publish(envelopes)
            return envelopes

    def _persist(self, envelopes: list[EventEnvelope]) -> None:
        """Durability hook; the in-memory store keeps nothing extra."""

    def _publish(self, envelopes: list[EventEnvelope]) -> None:
        self._queue.extend(envelopes)
        if self._dispatching:
            return
        self._dispatching = True
        try:
            while self._queue:
                envelope = self._queue.popleft()
                for sub_id in list(self._subscription_order):
                    entry = self._subscriptions.get(sub_id)
                    if entry is None:
                        continue
                    sub_filter, listener = entry
                    if sub_filter.matches(envelope):
                        listener(envelope)
        finally:
            self._dispatching = False

    # -- read side ----------------------------------------------------------

    def read_stream(self, aggregate_id: str, from_version: int = 1) -> list[EventEnvelope]:
        with self._lock:
            stream = self._streams.get(aggregate_id, [])
            return stream[max(from_version - 1, 0):]

    def read_all(
        self,
        from_global_sequence: int = 1,
        event_filter: SubscriptionFilter | None = None,
        limit: int | None = None,
    ) -> list[EventEnvelope]:
        with self._lock:
            envelopes = self._envelopes[max(from_global_sequence - 1, 0):]
        if event_filter is not None:
            envelopes = [e for e in envelopes if event_filter.matches(e)]
        if limit is not None:
            envelopes = envelopes[:limit]
        return list(envelopes)

    def stream_version(self, aggregate_id: str) -> int:
        with self._lock:
            return len(self._streams.get(aggregate_id, []))

    def last_sequence(self) -> int:
        with self._lock:
            return len(self._envelopes)

    def replay_aggregate(
        self,
        aggregate_id: str,
        apply_fn: Callable[[Any, EventEnvelope], Any],
        initial: Any = None,
    ) -> Any:
        """Rebuild an aggregate by folding its stream through ``apply_fn``."""
        state = initial
        for envelope in self.read_stream(aggregate_id):
            state = apply_fn(state, envelope)
        return state

    # -- subscriptions ------------------------------------------------------

    def subscribe(self, event_filter: SubscriptionFilter, listener: Listener) -> str:
        with self._lock:
            sub_id = f"sub-{self._next_subscription}"
            self._next_subscription += 1
            self._subscriptions[sub_id] = (event_filter, listener)
            self._subscription_order.append(sub_id)
            return sub_id

    def unsubscribe(self, subscription_id: str) -> None:
        with self._lock:
            self._subscriptions.pop(subscription_id, None)

    # -- maintenance --------------------------------------------------------

    def reset(self) -> None:
        """Drop all events and restart sequencing. Subscriptions survive."""
        with self._lock:
            self._envelopes.clear()
            self._streams.clear()
            self._queue.clear()


def encode_record(envelope: EventEnvelope) -> bytes:
    body = canonical_dumps(envelope.to_json()).encode("utf-8")
    return struct.pack(">I", len(body)) + body


#: First record of every log file; pins the on-disk format.
LOG_FORMAT_VERSION = "1"


class FileEventStore(InMemoryEventStore):
    """Event store with a write-through file log.

    Record layout: 4-byte big-endian length prefix, then that many bytes of
    UTF-8 canonical JSON. The first record is a header object pinning the
    format version; every subsequent record is one event envelope. Envelopes
    are flushed before publication, so anything a subscriber saw is on disk.
    """

    def __init__(self, path: str | Path) -> None:
        super().__init__()
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        if self.path.exists() and self.path.stat().st_size > 0:
            self._load()
            self._file = open(self.path, "ab")
        else:
            self._file = open(self.path, "wb")
            self._write_header()

    def _write_header(self) -> None:
        header = canonical_dumps({"formatVersion": LOG_FORMAT_VERSION}).encode("utf-8")
        self._file.write(struct.pack(">I", len(header)) + header)
        self._file.flush()

    def _load(self) -> None:
        import json

        with open(self.path, "rb") as fh:
            records = list(_read_records(fh))
        if not records:
            raise ValueError(f"{self.path}: empty log file")
        header = json.loads(records[0])
        version = header.get("formatVersion")
        if version != LOG_FORMAT_VERSION:
            raise ValueError(
                f"{self.path}: log format {version!r} is not supported (expected {LOG_FORMAT_VERSION!r})"
            )
        for raw in records[1:]:
            envelope = EventEnvelope.from_json(json.loads(raw))
            self._envelopes.append(envelope)
            self._streams.setdefault(envelope.aggregate_id, []).append(envelope)

    def _persist(self, envelopes: list[EventEnvelope]) -> None:
        for envelope in envelopes:
            self._file.write(encode_record(envelope))
        self._file.flush()

    def reset(self) -> None:
        with self._lock:
            super().reset()
            self._file.close()
            self._file = open(self.path, "wb")
            self._write_header()

    def close(self) -> None:
        self._file.close()


def _read_records(fh) -> Iterable[bytes]:
    while True:
        prefix = fh.read(4)
        if not prefix:
            return
        if len(prefix) < 4:
            raise ValueError("truncated record length prefix")
        (length,) = struct.unpack(">I", prefix)
        body = fh.read(length)
        if len(body) < length:
            raise ValueError("truncated record body")
        yield body


# ---------------------------------------------------------------------------
# command bus

@dataclass(frozen=True)
class CommandEnvelope:
    """A routed instruction: exactly one handler consumes it."""

    command_id: str
    command_type: str
    target_aggregate_id: str
    payload: dict = field(default_factory=dict)
    expected_version: int | None = None


CommandHandler = Callable[[CommandEnvelope], list[EventEnvelope]]


class CommandBus:
    """Point-to-point, synchronous command dispatch by command type."""

    def __init__(self) -> None:
        self._handlers: dict[str, CommandHandler] = {}

    def register(self, command_type: str, handler: CommandHandler) -> None:
        if command_type in self._handlers:
            raise AlreadyExists(f"a handler for {command_type!r} is already registered")
        self._handlers[command_type] = handler

    def dispatch(self, command: CommandEnvelope) -> list[EventEnvelope]:
        handler = self._handlers.get(command.command_type)
        if handler is None:
            raise UnroutableCommand(f"no handler registered for {command.command_type!r}")
        return handler(command)
