"""Simulation harness: virtual clock, deadline scheduler, lifecycle initiator.

Time only exists inside the simulation. The clock is an event-sourced
singleton ("simulation-clock" stream) that moves strictly forward; the
scheduler tracks every deadline scheduled by trades and breaches each one the
moment simulation time reaches its due time, including deadlines that are
already due when they arrive (a confirmation back-dated relative to the clock
triggers its overdue lifecycle immediately).

Breaching appends a DeadlineBreached event; the lifecycle initiator reacts to
those by dispatching the matching command. Command refusals are recorded as
FailedLifecycleAction events rather than raised, so one bad deadline cannot
stall the simulation.

All scheduler and clock state is a pure fold over stored events (``_apply``),
which is also how ``rebuild`` recovers it after a restart.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime
from typing import Callable

from .errors import (
    AlreadyExists,
    ClockRegression,
    DomainError,
    InvalidTransition,
    NoClock,
    NotFound,
    NothingScheduled,
)
from .events import (
    ClockAdvanced,
    ClockCreated,
    DeadlineBreached,
    DeadlineCancelled,
    DeadlineScheduled,
    FailedLifecycleAction,
)
from .eventstore import CommandBus, CommandEnvelope, EventEnvelope, InMemoryEventStore, SubscriptionFilter
from .lifecycle import Deadline, DeadlineKind, DeadlineStatus, LegKind, deadline_sort_key

CLOCK_ID = "simulation-clock"
CLOCK_STREAM = "simulation-clock"
SCHEDULER_STREAM = "scheduler"
INITIATOR_STREAM = "lifecycle-initiator"

#: Simulation time used to stamp envelopes before any clock exists.
EPOCH = datetime(1970, 1, 1)

_HARNESS_EVENT_TYPES = frozenset(
    {
        ClockCreated.EVENT_TYPE,
        ClockAdvanced.EVENT_TYPE,
        DeadlineScheduled.EVENT_TYPE,
        DeadlineBreached.EVENT_TYPE,
        DeadlineCancelled.EVENT_TYPE,
    }
)


@dataclass(frozen=True)
class TriggerReport:
    """What one clock movement caused: the deadlines breached, in order."""

    current_time: datetime
    breached: tuple[Deadline, ...]

    def to_json(self) -> dict:
        from .serialization import deadline_to_json

        return {
            "currentTime": self.current_time.isoformat(),
            "breachedDeadlines": [deadline_to_json(d) for d in self.breached],
        }


class SimulationHarness:
    def __init__(self, store: InMemoryEventStore) -> None:
        self._store = store
        self._clock_id: str | None = None
        self._time: datetime | None = None
        self._deadlines: dict[str, Deadline] = {}
        store.subscribe(
            SubscriptionFilter(event_types=_HARNESS_EVENT_TYPES), self._on_envelope
        )

    # -- state ----------------------------------------------------------------

    def now(self) -> datetime | None:
        return self._time

    def now_or_epoch(self) -> datetime:
        return self._time if self._time is not None else EPOCH

    def clock_id(self) -> str | None:
        return self._clock_id

    def open_deadlines(self) -> list[Deadline]:
        return sorted(
            (d for d in self._deadlines.values() if d.status is DeadlineStatus.OPEN),
            key=deadline_sort_key,
        )

    def all_deadlines(self) -> list[Deadline]:
        return sorted(self._deadlines.values(), key=deadline_sort_key)

    def clear(self) -> None:
        self._clock_id = None
        self._time = None
        self._deadlines.clear()

    def rebuild(self) -> None:
        """Recover clock and scheduler state by refolding the log."""
        self.clear()
        for envelope in self._store.read_all(
            event_filter=SubscriptionFilter(event_types=_HARNESS_EVENT_TYPES)
        ):
            self._apply(envelope)

    # -- pure transitions -------------------------------------------------------

    def _apply(self, envelope: EventEnvelope) -> None:
        event = envelope.decode()
        if isinstance(event, ClockCreated):
            self._clock_id = event.clock_id
            self._time = event.initial_time
        elif isinstance(event, ClockAdvanced):
            self._time = event.time
        elif isinstance(event, DeadlineScheduled):
            existing = self._deadlines.get(event.deadline.deadline_id)
            if existing is None or existing.status is DeadlineStatus.OPEN:
                self._deadlines[event.deadline.deadline_id] = event.deadline
        elif isinstance(event, DeadlineBreached):
            self._deadlines[event.deadline.deadline_id] = event.deadline
        elif isinstance(event, DeadlineCancelled):
            self._deadlines.pop(event.deadline_id, None)

    # -- reactive path ----------------------------------------------------------

    def _on_envelope(self, envelope: EventEnvelope) -> None:
        event = envelope.decode()
        self._apply(envelope)
        # A deadline that arrives already due breaches immediately.
        if isinstance(event, DeadlineScheduled) and self._time is not None:
            current = self._deadlines.get(event.deadline.deadline_id)
            if (
                current is not None
                and current.status is DeadlineStatus.OPEN
                and current.due_time <= self._time
            ):
                self._breach(current)

    def _breach(self, deadline: Deadline) -> None:
        triggered = replace(deadline, status=DeadlineStatus.TRIGGERED)
        self._deadlines[deadline.deadline_id] = triggered
        self._store.append(
            SCHEDULER_STREAM, None, [DeadlineBreached(triggered)], self.now_or_epoch()
        )

    # -- clock commands -----------------------------------------------------------

    def create_clock(self, initial_time: datetime) -> str:
        if self._clock_id is not None:
            raise AlreadyExists(
                f"clock {self._clock_id!r} already exists at {self._time.isoformat()}"
            )
        self._clock_id = CLOCK_ID
        self._time = initial_time
        self._store.append(
            CLOCK_STREAM, 0, [ClockCreated(CLOCK_ID, initial_time)], initial_time
        )
        self._sweep(initial_time)
        return CLOCK_ID

    def advance_to(self, target: datetime) -> TriggerReport:
        """Move time forward to ``target``, breaching every deadline whose due
        time is on or before it, in due-time order, letting each breach's
        knock-on events land before the next breach fires."""
        if self._clock_id is None:
            raise NoClock("no simulation clock exists yet")
        assert self._time is not None
        if target < self._time:
            raise ClockRegression(
                f"cannot move the clock backwards from {self._time.isoformat()} "
                f"to {target.isoformat()}",
                details={"currentTime": self._time.isoformat(), "requested": target.isoformat()},
            )
        first_new = self._store.last_sequence() + 1
        if target > self._time:
            self._time = target
            self._store.append(CLOCK_STREAM, None, [ClockAdvanced(CLOCK_ID, target)], target)
        self._sweep(target)
        return self._report(first_new)

    def advance_to_next_deadline(self) -> TriggerReport:
        if self._clock_id is None:
            raise NoClock("no simulation clock exists yet")
        upcoming = self.open_deadlines()
        if not upcoming:
            raise NothingScheduled("no open deadlines to advance to")
        target = max(upcoming[0].due_time, self._time)
        return self.advance_to(target)

    def play(self) -> TriggerReport:
        """Advance deadline by deadline until nothing remains scheduled."""
        if self._clock_id is None:
            raise NoClock("no simulation clock exists yet")
        first_new = self._store.last_sequence() + 1
        for _ in range(100_000):
            upcoming = self.open_deadlines()
            if not upcoming:
                break
            self.advance_to(max(upcoming[0].due_time, self._time))
        else:
            raise RuntimeError("play did not converge; deadlines keep being scheduled")
        return self._report(first_new)

    def cancel_deadline(self, deadline_id: str) -> None:
        deadline = self._deadlines.get(deadline_id)
        if deadline is None:
            raise NotFound(f"no deadline with id {deadline_id!r}")
        if deadline.status is not DeadlineStatus.OPEN:
            raise InvalidTransition(f"deadline {deadline_id!r} has already been triggered")
        self._store.append(
            SCHEDULER_STREAM,
            None,
            [DeadlineCancelled(deadline_id, deadline.trade_id)],
            self.now_or_epoch(),
        )

    # -- internals ---------------------------------------------------------------

    def _sweep(self, limit: datetime) -> None:
        """Breach due deadlines one at a time, earliest first. Each append is
        top-level, so the full cascade of one breach settles before the next."""
        while True:
            due = [
                d
                for d in self._deadlines.values()
                if d.status is DeadlineStatus.OPEN and d.due_time <= limit
            ]
            if not due:
                return
            self._breach(min(due, key=deadline_sort_key))

    def _report(self, first_sequence: int) -> TriggerReport:
        breached = [
            envelope.decode().deadline
            for envelope in self._store.read_all(
                from_global_sequence=first_sequence,
                event_filter=SubscriptionFilter(event_types=frozenset({DeadlineBreached.EVENT_TYPE})),
            )
        ]
        return TriggerReport(current_time=self._time, breached=tuple(breached))


_KIND_TO_LEG = {
    DeadlineKind.FIXED_PAYMENT: LegKind.FIXED,
    DeadlineKind.FLOATING_PAYMENT: LegKind.FLOATING,
}


class LifecycleInitiator:
    """Turns deadline breaches into lifecycle commands.

    Failures are recorded, never raised: the simulation must keep moving even
    when an individual action is refused (say, a payment on an already-matured
    trade)."""

    def __init__(
        self, store: InMemoryEventStore, bus: CommandBus, now: Callable[[], datetime]
    ) -> None:
        self._store = store
        self._bus = bus
        self._now = now
        store.subscribe(
            SubscriptionFilter(event_types=frozenset({DeadlineBreached.EVENT_TYPE})),
            self._on_breached,
        )

    def _on_breached(self, envelope: EventEnvelope) -> None:
        deadline = envelope.decode().deadline
        if deadline.kind is DeadlineKind.RESET:
            action = "TriggerReset"
            payload = {"tradeId": deadline.trade_id, "periodIndex": deadline.period_index}
        else:
            action = "TriggerPayment"
            payload = {
                "tradeId": deadline.trade_id,
                "legKind": _KIND_TO_LEG[deadline.kind].value,
                "periodIndex": deadline.period_index,
            }
        command = CommandEnvelope(
            command_id=f"auto-{envelope.global_sequence}",
            command_type=action,
            target_aggregate_id=f"trade.{deadline.trade_id}",
            payload=payload,
        )
        try:
            self._bus.dispatch(command)
        except DomainError as exc:
            self._store.append(
                INITIATOR_STREAM,
                None,
                [
                    FailedLifecycleAction(
                        deadline_id=deadline.deadline_id,
                        trade_id=deadline.trade_id,
                        action=action,
                        error_code=exc.code,
                        message=str(exc),
                    )
                ],
                self._now(),
            )
