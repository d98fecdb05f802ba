"""Simulator event catalogue.

These are the persisted event types that flow through the event store. Four of
them wrap a business event from the domain model and are flagged as CDM events
in their envelopes; the rest are infrastructure events (consent decisions,
scheduler bookkeeping, clock movement, payment settlement).

Each class knows its wire name, its CDM flag, and how to encode itself to a
JSON-able payload and back. ``decode_event`` is the single entry point used
when replaying or projecting from stored envelopes.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Any, ClassVar, Union

from .lifecycle import Deadline, LegKind
from .model import BusinessEvent, Transfer
from .serialization import (
    _parse_enum,
    _parse_int,
    _parse_str,
    _require,
    business_event_from_json,
    business_event_to_json,
    deadline_from_json,
    deadline_to_json,
    parse_datetime,
    transfer_from_json,
    transfer_to_json,
)


@dataclass(frozen=True)
class ExecutionOccurred:
    """A new trade was executed. Wraps the execution business event."""

    business_event: BusinessEvent

    EVENT_TYPE: ClassVar[str] = "ExecutionOccurred"
    IS_CDM: ClassVar[bool] = True

    def to_payload(self) -> dict:
        return {"businessEvent": business_event_to_json(self.business_event)}

    @classmethod
    def from_payload(cls, payload: dict) -> "ExecutionOccurred":
        return cls(business_event_from_json(_require(payload, "businessEvent", cls.EVENT_TYPE)))


@dataclass(frozen=True)
class TradeConfirmed:
    """Counterparty consent confirmed the trade, forming the contract."""

    business_event: BusinessEvent

    EVENT_TYPE: ClassVar[str] = "TradeConfirmed"
    IS_CDM: ClassVar[bool] = True

    def to_payload(self) -> dict:
        return {"businessEvent": business_event_to_json(self.business_event)}

    @classmethod
    def from_payload(cls, payload: dict) -> "TradeConfirmed":
        return cls(business_event_from_json(_require(payload, "businessEvent", cls.EVENT_TYPE)))


@dataclass(frozen=True)
class TradeRejected:
    """Counterparty consent rejected the trade. Terminal for the trade."""

    trade_id: str

    EVENT_TYPE: ClassVar[str] = "TradeRejected"
    IS_CDM: ClassVar[bool] = False

    def to_payload(self) -> dict:
        return {"tradeId": self.trade_id}

    @classmethod
    def from_payload(cls, payload: dict) -> "TradeRejected":
        return cls(trade_id=_parse_str(payload, "tradeId", cls.EVENT_TYPE))


@dataclass(frozen=True)
class RateReset:
    """A floating-rate fixing was applied for one calculation period."""

    business_event: BusinessEvent
    period_index: int

    EVENT_TYPE: ClassVar[str] = "RateReset"
    IS_CDM: ClassVar[bool] = True

    def to_payload(self) -> dict:
        return {
            "businessEvent": business_event_to_json(self.business_event),
            "periodIndex": self.period_index,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "RateReset":
        return cls(
            business_event=business_event_from_json(_require(payload, "businessEvent", cls.EVENT_TYPE)),
            period_index=_parse_int(payload, "periodIndex", cls.EVENT_TYPE),
        )


@dataclass(frozen=True)
class CashTransferred:
    """A period cashflow settled between the counterparties."""

    business_event: BusinessEvent
    leg_kind: LegKind
    period_index: int

    EVENT_TYPE: ClassVar[str] = "CashTransferred"
    IS_CDM: ClassVar[bool] = True

    def to_payload(self) -> dict:
        return {
            "businessEvent": business_event_to_json(self.business_event),
            "legKind": self.leg_kind.value,
            "periodIndex": self.period_index,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "CashTransferred":
        return cls(
            business_event=business_event_from_json(_require(payload, "businessEvent", cls.EVENT_TYPE)),
            leg_kind=_parse_enum(payload, "legKind", LegKind, cls.EVENT_TYPE),
            period_index=_parse_int(payload, "periodIndex", cls.EVENT_TYPE),
        )


@dataclass(frozen=True)
class TradeMatured:
    """Every scheduled cashflow has settled; the trade reached maturity."""

    trade_id: str

    EVENT_TYPE: ClassVar[str] = "TradeMatured"
    IS_CDM: ClassVar[bool] = False

    def to_payload(self) -> dict:
        return {"tradeId": self.trade_id}

    @classmethod
    def from_payload(cls, payload: dict) -> "TradeMatured":
        return cls(trade_id=_parse_str(payload, "tradeId", cls.EVENT_TYPE))


@dataclass(frozen=True)
class DeadlineScheduled:
    """A future lifecycle action was placed on the trade's calendar."""

    deadline: Deadline

    EVENT_TYPE: ClassVar[str] = "DeadlineScheduled"
    IS_CDM: ClassVar[bool] = False

    def to_payload(self) -> dict:
        return {"deadline": deadline_to_json(self.deadline)}

    @classmethod
    def from_payload(cls, payload: dict) -> "DeadlineScheduled":
        return cls(deadline=deadline_from_json(_require(payload, "deadline", cls.EVENT_TYPE)))


@dataclass(frozen=True)
class DeadlineBreached:
    """Simulation time reached a deadline's due time."""

    deadline: Deadline

    EVENT_TYPE: ClassVar[str] = "DeadlineBreached"
    IS_CDM: ClassVar[bool] = False

    def to_payload(self) -> dict:
        return {"deadline": deadline_to_json(self.deadline)}

    @classmethod
    def from_payload(cls, payload: dict) -> "DeadlineBreached":
        return cls(deadline=deadline_from_json(_require(payload, "deadline", cls.EVENT_TYPE)))


@dataclass(frozen=True)
class DeadlineCancelled:
    """An open deadline was withdrawn before its due time."""

    deadline_id: str
    trade_id: str

    EVENT_TYPE: ClassVar[str] = "DeadlineCancelled"
    IS_CDM: ClassVar[bool] = False

    def to_payload(self) -> dict:
        return {"deadlineId": self.deadline_id, "tradeId": self.trade_id}

    @classmethod
    def from_payload(cls, payload: dict) -> "DeadlineCancelled":
        return cls(
            deadline_id=_parse_str(payload, "deadlineId", cls.EVENT_TYPE),
            trade_id=_parse_str(payload, "tradeId", cls.EVENT_TYPE),
        )


@dataclass(frozen=True)
class FailedLifecycleAction:
    """A deadline fired but the resulting command was refused. The failure is
    recorded instead of raised so the simulation keeps moving."""

    deadline_id: str
    trade_id: str
    action: str
    error_code: str
    message: str

    EVENT_TYPE: ClassVar[str] = "FailedLifecycleAction"
    IS_CDM: ClassVar[bool] = False

    def to_payload(self) -> dict:
        return {
            "deadlineId": self.deadline_id,
            "tradeId": self.trade_id,
            "action": self.action,
            "errorCode": self.error_code,
            "message": self.message,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "FailedLifecycleAction":
        return cls(
            deadline_id=_parse_str(payload, "deadlineId", cls.EVENT_TYPE),
            trade_id=_parse_str(payload, "tradeId", cls.EVENT_TYPE),
            action=_parse_str(payload, "action", cls.EVENT_TYPE),
            error_code=_parse_str(payload, "errorCode", cls.EVENT_TYPE),
            message=_parse_str(payload, "message", cls.EVENT_TYPE),
        )


@dataclass(frozen=True)
class PaymentInstructed:
    """A payment obligation was handed to the settlement simulation. Carries
    enough context to record the cashflow back onto the trade once settled."""

    transfer: Transfer
    trade_id: str
    leg_kind: LegKind
    period_index: int

    EVENT_TYPE: ClassVar[str] = "PaymentInstructed"
    IS_CDM: ClassVar[bool] = False

    def to_payload(self) -> dict:
        return {
            "transfer": transfer_to_json(self.transfer),
            "tradeId": self.trade_id,
            "legKind": self.leg_kind.value,
            "periodIndex": self.period_index,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "PaymentInstructed":
        return cls(
            transfer=transfer_from_json(_require(payload, "transfer", cls.EVENT_TYPE)),
            trade_id=_parse_str(payload, "tradeId", cls.EVENT_TYPE),
            leg_kind=_parse_enum(payload, "legKind", LegKind, cls.EVENT_TYPE),
            period_index=_parse_int(payload, "periodIndex", cls.EVENT_TYPE),
        )


@dataclass(frozen=True)
class PaymentSettled:
    """The settlement simulation completed a previously instructed payment."""

    transfer_id: str

    EVENT_TYPE: ClassVar[str] = "PaymentSettled"
    IS_CDM: ClassVar[bool] = False

    def to_payload(self) -> dict:
        return {"transferId": self.transfer_id}

    @classmethod
    def from_payload(cls, payload: dict) -> "PaymentSettled":
        return cls(transfer_id=_parse_str(payload, "transferId", cls.EVENT_TYPE))


@dataclass(frozen=True)
class ClockCreated:
    """The simulation clock came into existence at an initial time."""

    clock_id: str
    initial_time: datetime

    EVENT_TYPE: ClassVar[str] = "ClockCreated"
    IS_CDM: ClassVar[bool] = False

    def to_payload(self) -> dict:
        return {"clockId": self.clock_id, "initialTime": self.initial_time.isoformat()}

    @classmethod
    def from_payload(cls, payload: dict) -> "ClockCreated":
        return cls(
            clock_id=_parse_str(payload, "clockId", cls.EVENT_TYPE),
            initial_time=parse_datetime(
                _parse_str(payload, "initialTime", cls.EVENT_TYPE), "initialTime"
            ),
        )


@dataclass(frozen=True)
class ClockAdvanced:
    """The simulation clock moved forward to a new current time."""

    clock_id: str
    time: datetime

    EVENT_TYPE: ClassVar[str] = "ClockAdvanced"
    IS_CDM: ClassVar[bool] = False

    def to_payload(self) -> dict:
        return {"clockId": self.clock_id, "time": self.time.isoformat()}

    @classmethod
    def from_payload(cls, payload: dict) -> "ClockAdvanced":
        return cls(
            clock_id=_parse_str(payload, "clockId", cls.EVENT_TYPE),
            time=parse_datetime(_parse_str(payload, "time", cls.EVENT_TYPE), "time"),
        )


SimulatorEvent = Union[
    ExecutionOccurred,
    TradeConfirmed,
    TradeRejected,
    RateReset,
    CashTransferred,
    TradeMatured,
    DeadlineScheduled,
    DeadlineBreached,
    DeadlineCancelled,
    FailedLifecycleAction,
    PaymentInstructed,
    PaymentSettled,
    ClockCreated,
    ClockAdvanced,
]

EVENT_CLASSES: dict[str, type] = {
    cls.EVENT_TYPE: cls
    for cls in (
        ExecutionOccurred,
        TradeConfirmed,
        TradeRejected,
        RateReset,
        CashTransferred,
        TradeMatured,
        DeadlineScheduled,
        DeadlineBreached,
        DeadlineCancelled,
        FailedLifecycleAction,
        PaymentInstructed,
        PaymentSettled,
        ClockCreated,
        ClockAdvanced,
    )
}

#: Wire names of the event types that carry a CDM business event.
CDM_EVENT_TYPES = frozenset(name for name, cls in EVENT_CLASSES.items() if cls.IS_CDM)


def decode_event(event_type: str, payload: dict) -> SimulatorEvent:
    """Reconstruct a typed simulator event from a stored envelope payload."""
    cls = EVENT_CLASSES.get(event_type)
    if cls is None:
        raise ValueError(f"unknown event type {event_type!r}")
    return cls.from_payload(payload)


def cdm_event_of(event: Any) -> BusinessEvent | None:
    """The wrapped business event, if this simulator event carries one."""
    return getattr(event, "business_event", None)
