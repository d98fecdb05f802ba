"""Command side of the market-infrastructure services.

Owns two aggregate types, both rebuilt purely by folding their event streams:

* the swap aggregate (one per trade): execution, consent, resets, recorded
  cashflows, maturity;
* the payment aggregate (one per transfer): instruction then settlement.

``FmiCommandService`` registers one handler per command type on the command
bus. Handlers validate against current aggregate state, append new events with
optimistic concurrency, and keep an in-memory aggregate cache that is always
equal to a fresh replay of the stream.

Payments run as a small reactive chain: TriggerPayment appends
PaymentInstructed; a subscriber settles it by dispatching SettlePayment; a
second subscriber reacts to PaymentSettled by recording the CashTransferred
business event on the trade, appending TradeMatured in the same batch once the
final scheduled cashflow is in.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from datetime import datetime
from typing import Callable

from ..errors import (
    AlreadyPaid,
    AlreadyReset,
    AlreadySettled,
    DuplicateTrade,
    InvalidCommand,
    InvalidTrade,
    InvalidTransition,
    NotFound,
    ResetMissing,
    UnknownParty,
)
from ..events import (
    CashTransferred,
    DeadlineScheduled,
    ExecutionOccurred,
    PaymentInstructed,
    PaymentSettled,
    RateReset,
    TradeConfirmed,
    TradeMatured,
    TradeRejected,
)
from ..eventstore import (
    CommandBus,
    CommandEnvelope,
    EventEnvelope,
    InMemoryEventStore,
    SubscriptionFilter,
)
from ..lifecycle import (
    LegKind,
    create_cash_transfer_event,
    create_contract_formation_event,
    create_execution_event,
    create_reset_event,
    day_count_fraction,
    fixed_amount,
    floating_amount,
    generate_schedule,
    project_deadlines,
    resolve_observation,
)
from ..model import (
    FixedRate,
    FloatingRate,
    InterestRatePayout,
    Trade,
    TradeState,
    TradeStatus,
    Transfer,
    TransferStatus,
    fixed_leg,
    floating_leg,
)
from ..registry import PartyRegistry
from ..serialization import trade_from_json, trade_to_json


def trade_stream_id(trade_id: str) -> str:
    return f"trade.{trade_id}"


def payment_stream_id(transfer_id: str) -> str:
    return f"payment.{transfer_id}"


def transfer_id_for(trade_id: str, leg_kind: LegKind, period_index: int) -> str:
    return f"{trade_id}.transfer.{leg_kind.value.lower()}.{period_index}"


class ConsentDecision(enum.Enum):
    CONFIRM = "CONFIRM"
    REJECT = "REJECT"


# ---------------------------------------------------------------------------
# aggregates

@dataclass(frozen=True)
class IrsAggregate:
    """Current state of one swap, equal to a fold of its event stream."""

    trade_id: str
    state: TradeState
    version: int
    reset_periods: frozenset[int] = frozenset()
    paid_legs: frozenset[tuple[str, int]] = frozenset()

    @property
    def status(self) -> TradeStatus:
        return self.state.status

    @property
    def open_actions(self) -> tuple[str, ...]:
        """Operator actions available right now. Consent (confirm or reject)
        is the only one, open while the execution awaits a decision."""
        if self.status is TradeStatus.EXECUTED:
            return ("ConfirmExecution",)
        return ()


def evolve_irs(aggregate: IrsAggregate | None, envelope: EventEnvelope) -> IrsAggregate:
    """Apply one stored event to the swap aggregate. Total over the events the
    trade stream can contain; unknown types are rejected loudly."""
    event = envelope.decode()
    if isinstance(event, ExecutionOccurred):
        after = event.business_event.after
        return IrsAggregate(
            trade_id=after.trade.trade_id,
            state=after,
            version=envelope.aggregate_version,
        )
    if aggregate is None:
        raise ValueError(f"stream {envelope.aggregate_id!r} does not begin with an execution")
    bumped = replace(aggregate, version=envelope.aggregate_version)
    if isinstance(event, TradeConfirmed):
        return replace(bumped, state=event.business_event.after)
    if isinstance(event, TradeRejected):
        return replace(bumped, state=replace(aggregate.state, status=TradeStatus.REJECTED))
    if isinstance(event, RateReset):
        return replace(
            bumped,
            state=event.business_event.after,
            reset_periods=aggregate.reset_periods | {event.period_index},
        )
    if isinstance(event, CashTransferred):
        return replace(
            bumped,
            state=event.business_event.after,
            paid_legs=aggregate.paid_legs | {(event.leg_kind.value, event.period_index)},
        )
    if isinstance(event, TradeMatured):
        return replace(bumped, state=replace(aggregate.state, status=TradeStatus.MATURED))
    if isinstance(event, DeadlineScheduled):
        return bumped
    raise ValueError(f"unexpected event {envelope.event_type!r} on trade stream")


@dataclass(frozen=True)
class PaymentAggregate:
    """Settlement state of one transfer."""

    transfer_id: str
    transfer: Transfer
    trade_id: str
    leg_kind: LegKind
    period_index: int
    version: int

    @property
    def status(self) -> TransferStatus:
        return self.transfer.status


def evolve_payment(aggregate: PaymentAggregate | None, envelope: EventEnvelope) -> PaymentAggregate:
    event = envelope.decode()
    if isinstance(event, PaymentInstructed):
        return PaymentAggregate(
            transfer_id=event.transfer.transfer_id,
            transfer=event.transfer,
            trade_id=event.trade_id,
            leg_kind=event.leg_kind,
            period_index=event.period_index,
            version=envelope.aggregate_version,
        )
    if aggregate is None:
        raise ValueError(f"stream {envelope.aggregate_id!r} does not begin with an instruction")
    if isinstance(event, PaymentSettled):
        return replace(
            aggregate,
            transfer=replace(aggregate.transfer, status=TransferStatus.SETTLED),
            version=envelope.aggregate_version,
        )
    raise ValueError(f"unexpected event {envelope.event_type!r} on payment stream")


# ---------------------------------------------------------------------------
# command payload parsing

def _payload_str(payload: dict, field: str) -> str:
    value = payload.get(field)
    if not isinstance(value, str) or not value:
        raise InvalidCommand(f"command payload field {field!r} must be a non-empty string")
    return value


def _payload_int(payload: dict, field: str) -> int:
    value = payload.get(field)
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise InvalidCommand(f"command payload field {field!r} must be a non-negative integer")
    return value


def _payload_enum(payload: dict, field: str, enum_cls: type) -> enum.Enum:
    raw = _payload_str(payload, field)
    try:
        return enum_cls(raw)
    except ValueError:
        allowed = ", ".join(member.value for member in enum_cls)
        raise InvalidCommand(f"command payload field {field!r} must be one of {allowed}") from None


# ---------------------------------------------------------------------------
# service

class FmiCommandService:
    """Registers command handlers and maintains the aggregate caches."""

    def __init__(
        self,
        store: InMemoryEventStore,
        bus: CommandBus,
        registry: PartyRegistry,
        now: Callable[[], datetime],
        seed: Callable[[], int],
    ) -> None:
        self._store = store
        self._bus = bus
        self._registry = registry
        self._now = now
        self._seed = seed
        self._irs: dict[str, IrsAggregate] = {}
        self._payments: dict[str, PaymentAggregate] = {}
        self._next_command = 1
        bus.register("SubmitExecution", self._handle_submit_execution)
        bus.register("Consent", self._handle_consent)
        bus.register("TriggerReset", self._handle_trigger_reset)
        bus.register("TriggerPayment", self._handle_trigger_payment)
        bus.register("SettlePayment", self._handle_settle_payment)
        store.subscribe(
            SubscriptionFilter(event_types=frozenset({PaymentInstructed.EVENT_TYPE})),
            self._on_payment_instructed,
        )
        store.subscribe(
            SubscriptionFilter(event_types=frozenset({PaymentSettled.EVENT_TYPE})),
            self._on_payment_settled,
        )

    # -- convenience dispatchers (API entry points) --------------------------

    def _command(self, command_type: str, target: str, payload: dict) -> CommandEnvelope:
        envelope = CommandEnvelope(
            command_id=f"cmd-{self._next_command}",
            command_type=command_type,
            target_aggregate_id=target,
            payload=payload,
        )
        self._next_command += 1
        return envelope

    def submit_execution(self, trade: Trade) -> list[EventEnvelope]:
        command = self._command(
            "SubmitExecution", trade_stream_id(trade.trade_id), {"trade": trade_to_json(trade)}
        )
        return self._bus.dispatch(command)

    def consent(self, trade_id: str, decision: ConsentDecision) -> list[EventEnvelope]:
        command = self._command(
            "Consent", trade_stream_id(trade_id), {"tradeId": trade_id, "decision": decision.value}
        )
        return self._bus.dispatch(command)

    def trigger_reset(self, trade_id: str, period_index: int) -> list[EventEnvelope]:
        command = self._command(
            "TriggerReset",
            trade_stream_id(trade_id),
            {"tradeId": trade_id, "periodIndex": period_index},
        )
        return self._bus.dispatch(command)

    def trigger_payment(self, trade_id: str, leg_kind: LegKind, period_index: int) -> list[EventEnvelope]:
        command = self._command(
            "TriggerPayment",
            trade_stream_id(trade_id),
            {"tradeId": trade_id, "legKind": leg_kind.value, "periodIndex": period_index},
        )
        return self._bus.dispatch(command)

    # -- aggregate access ----------------------------------------------------

    def irs_aggregate(self, trade_id: str) -> IrsAggregate:
        aggregate = self._load_irs(trade_id)
        if aggregate is None:
            raise NotFound(f"no trade with id {trade_id!r}", details={"tradeId": trade_id})
        return aggregate

    def payment_aggregate(self, transfer_id: str) -> PaymentAggregate:
        aggregate = self._load_payment(transfer_id)
        if aggregate is None:
            raise NotFound(f"no transfer with id {transfer_id!r}", details={"transferId": transfer_id})
        return aggregate

    def replay_irs(self, trade_id: str) -> IrsAggregate | None:
        """Rebuild the swap aggregate from the log, bypassing the cache."""
        return self._store.replay_aggregate(trade_stream_id(trade_id), evolve_irs)

    def trade_ids(self) -> list[str]:
        """All known trades, in execution order."""
        seen: list[str] = []
        execution_filter = SubscriptionFilter(event_types=frozenset({ExecutionOccurred.EVENT_TYPE}))
        for envelope in self._store.read_all(event_filter=execution_filter):
            trade_id = envelope.aggregate_id.removeprefix("trade.")
            if trade_id not in seen:
                seen.append(trade_id)
        return seen

    def party_in_use(self, party_id: str) -> bool:
        """True while any non-terminal trade references the party."""
        for trade_id in self.trade_ids():
            aggregate = self._load_irs(trade_id)
            if aggregate is None:
                continue
            if aggregate.status in (TradeStatus.EXECUTED, TradeStatus.CONFIRMED):
                if party_id in aggregate.state.trade.tradable_product.party_refs():
                    return True
        return False

    def clear(self) -> None:
        self._irs.clear()
        self._payments.clear()

    def _load_irs(self, trade_id: str) -> IrsAggregate | None:
        cached = self._irs.get(trade_id)
        stream_version = self._store.stream_version(trade_stream_id(trade_id))
        if cached is not None and cached.version == stream_version:
            return cached
        if stream_version == 0:
            return None
        aggregate = self._store.replay_aggregate(trade_stream_id(trade_id), evolve_irs)
        self._irs[trade_id] = aggregate
        return aggregate

    def _load_payment(self, transfer_id: str) -> PaymentAggregate | None:
        cached = self._payments.get(transfer_id)
        stream_version = self._store.stream_version(payment_stream_id(transfer_id))
        if cached is not None and cached.version == stream_version:
            return cached
        if stream_version == 0:
            return None
        aggregate = self._store.replay_aggregate(payment_stream_id(transfer_id), evolve_payment)
        self._payments[transfer_id] = aggregate
        return aggregate

    def _apply_irs(self, envelopes: list[EventEnvelope]) -> None:
        for envelope in envelopes:
            trade_id = envelope.aggregate_id.removeprefix("trade.")
            self._irs[trade_id] = evolve_irs(self._irs.get(trade_id), envelope)

    def _apply_payment(self, envelopes: list[EventEnvelope]) -> None:
        for envelope in envelopes:
            transfer_id = envelope.aggregate_id.removeprefix("payment.")
            self._payments[transfer_id] = evolve_payment(self._payments.get(transfer_id), envelope)

    # -- command handlers ----------------------------------------------------

    def _handle_submit_execution(self, command: CommandEnvelope) -> list[EventEnvelope]:
        trade_obj = command.payload.get("trade")
        try:
            trade = trade_from_json(trade_obj)
        except ValueError as exc:
            raise InvalidTrade(str(exc)) from None
        if self._store.stream_version(trade_stream_id(trade.trade_id)) > 0:
            raise DuplicateTrade(
                f"trade id {trade.trade_id!r} is already in use",
                details={"tradeId": trade.trade_id},
            )
        missing = self._registry.missing(trade.tradable_product.party_refs())
        if missing:
            raise UnknownParty(
                "trade references unregistered parties: " + ", ".join(sorted(missing)),
                details={"missing": sorted(missing)},
            )
        event = create_execution_event(trade, self._now())
        envelopes = self._store.append(
            trade_stream_id(trade.trade_id),
            command.expected_version if command.expected_version is not None else 0,
            [ExecutionOccurred(event)],
            self._now(),
        )
        self._apply_irs(envelopes)
        return envelopes

    def _handle_consent(self, command: CommandEnvelope) -> list[EventEnvelope]:
        trade_id = _payload_str(command.payload, "tradeId")
        decision = _payload_enum(command.payload, "decision", ConsentDecision)
        aggregate = self.irs_aggregate(trade_id)
        expected = command.expected_version if command.expected_version is not None else aggregate.version
        if decision is ConsentDecision.CONFIRM:
            event = create_contract_formation_event(aggregate.state, self._now())
            deadlines = project_deadlines(event.after)
            events = [TradeConfirmed(event)] + [DeadlineScheduled(d) for d in deadlines]
        else:
            if aggregate.status is not TradeStatus.EXECUTED:
                raise InvalidTransition(
                    f"cannot reject a trade in status {aggregate.status.value}"
                )
            events = [TradeRejected(trade_id)]
        envelopes = self._store.append(trade_stream_id(trade_id), expected, events, self._now())
        self._apply_irs(envelopes)
        return envelopes

    def _handle_trigger_reset(self, command: CommandEnvelope) -> list[EventEnvelope]:
        trade_id = _payload_str(command.payload, "tradeId")
        period_index = _payload_int(command.payload, "periodIndex")
        aggregate = self.irs_aggregate(trade_id)
        if aggregate.status is not TradeStatus.CONFIRMED:
            raise InvalidTransition(f"cannot reset a trade in status {aggregate.status.value}")
        if period_index in aggregate.reset_periods:
            raise AlreadyReset(
                f"period {period_index} of trade {trade_id!r} already has a fixing",
                details={"tradeId": trade_id, "periodIndex": period_index},
            )
        leg = floating_leg(aggregate.state.trade.tradable_product.product)
        if leg is None:
            raise InvalidTransition("trade has no floating payout to reset")
        schedule = generate_schedule(leg.periods)
        if period_index >= len(schedule):
            raise InvalidCommand(
                f"floating leg has {len(schedule)} periods, no period {period_index}"
            )
        period = schedule[period_index]
        assert isinstance(leg.rate, FloatingRate)
        observation = resolve_observation(
            leg.rate.index, leg.rate.tenor_months, period.adjusted_start, self._seed()
        )
        event = create_reset_event(aggregate.state, observation, self._now())
        expected = command.expected_version if command.expected_version is not None else aggregate.version
        envelopes = self._store.append(
            trade_stream_id(trade_id), expected, [RateReset(event, period_index)], self._now()
        )
        self._apply_irs(envelopes)
        return envelopes

    def _handle_trigger_payment(self, command: CommandEnvelope) -> list[EventEnvelope]:
        trade_id = _payload_str(command.payload, "tradeId")
        leg_kind = _payload_enum(command.payload, "legKind", LegKind)
        period_index = _payload_int(command.payload, "periodIndex")
        aggregate = self.irs_aggregate(trade_id)
        if aggregate.status is not TradeStatus.CONFIRMED:
            raise InvalidTransition(f"cannot pay on a trade in status {aggregate.status.value}")
        if (leg_kind.value, period_index) in aggregate.paid_legs:
            raise AlreadyPaid(
                f"{leg_kind.value.lower()} period {period_index} of trade {trade_id!r} is already paid",
                details={"tradeId": trade_id, "legKind": leg_kind.value, "periodIndex": period_index},
            )
        transfer_id = transfer_id_for(trade_id, leg_kind, period_index)
        if self._store.stream_version(payment_stream_id(transfer_id)) > 0:
            raise AlreadyPaid(
                f"transfer {transfer_id!r} is already instructed",
                details={"transferId": transfer_id},
            )
        product = aggregate.state.trade.tradable_product.product
        leg = fixed_leg(product) if leg_kind is LegKind.FIXED else floating_leg(product)
        if leg is None:
            raise InvalidTransition(f"trade has no {leg_kind.value.lower()} payout")
        schedule = generate_schedule(leg.periods)
        if period_index >= len(schedule):
            raise InvalidCommand(
                f"{leg_kind.value.lower()} leg has {len(schedule)} periods, no period {period_index}"
            )
        period = schedule[period_index]
        dcf = day_count_fraction(period.adjusted_start, period.adjusted_end, leg.day_count)
        if leg_kind is LegKind.FIXED:
            assert isinstance(leg.rate, FixedRate)
            amount = fixed_amount(leg.notional, leg.rate.rate, dcf)
        else:
            if period_index not in aggregate.reset_periods:
                raise ResetMissing(
                    f"floating period {period_index} of trade {trade_id!r} has no fixing yet",
                    details={"tradeId": trade_id, "periodIndex": period_index},
                )
            record = self._reset_record_for(aggregate, period.adjusted_start)
            assert isinstance(leg.rate, FloatingRate)
            amount = floating_amount(leg.notional, record.observed_rate, leg.rate.spread, dcf)
        transfer = Transfer(
            transfer_id=transfer_id,
            payer_party_ref=leg.payer_party_ref,
            receiver_party_ref=leg.receiver_party_ref,
            amount=amount,
            currency=leg.currency,
            settlement_date=period.payment_date,
            status=TransferStatus.INSTRUCTED,
        )
        instructed = PaymentInstructed(
            transfer=transfer, trade_id=trade_id, leg_kind=leg_kind, period_index=period_index
        )
        envelopes = self._store.append(
            payment_stream_id(transfer_id), 0, [instructed], self._now()
        )
        self._apply_payment(envelopes)
        return envelopes

    def _reset_record_for(self, aggregate: IrsAggregate, reset_date):
        for record in aggregate.state.reset_history:
            if record.reset_date == reset_date:
                return record
        raise ResetMissing(
            f"no fixing recorded for {reset_date.isoformat()} on trade {aggregate.trade_id!r}"
        )

    def _handle_settle_payment(self, command: CommandEnvelope) -> list[EventEnvelope]:
        transfer_id = _payload_str(command.payload, "transferId")
        aggregate = self.payment_aggregate(transfer_id)
        if aggregate.status is TransferStatus.SETTLED:
            raise AlreadySettled(f"transfer {transfer_id!r} is already settled")
        expected = command.expected_version if command.expected_version is not None else aggregate.version
        envelopes = self._store.append(
            payment_stream_id(transfer_id), expected, [PaymentSettled(transfer_id)], self._now()
        )
        self._apply_payment(envelopes)
        return envelopes

    # -- reactive settlement chain -------------------------------------------

    def _on_payment_instructed(self, envelope: EventEnvelope) -> None:
        """Settlement simulation: instructed payments settle immediately."""
        event = envelope.decode()
        aggregate = self._load_payment(event.transfer.transfer_id)
        if aggregate is None or aggregate.status is TransferStatus.SETTLED:
            return
        command = self._command(
            "SettlePayment",
            payment_stream_id(event.transfer.transfer_id),
            {"transferId": event.transfer.transfer_id},
        )
        self._bus.dispatch(command)

    def _on_payment_settled(self, envelope: EventEnvelope) -> None:
        """Record the settled cashflow on the trade; mature it on the last one."""
        transfer_id = envelope.aggregate_id.removeprefix("payment.")
        payment = self._load_payment(transfer_id)
        if payment is None:
            return
        aggregate = self._load_irs(payment.trade_id)
        if aggregate is None or aggregate.status is not TradeStatus.CONFIRMED:
            return
        if (payment.leg_kind.value, payment.period_index) in aggregate.paid_legs:
            return
        event = create_cash_transfer_event(aggregate.state, payment.transfer, self._now())
        events = [CashTransferred(event, payment.leg_kind, payment.period_index)]
        if len(event.after.transfer_history) == self._total_cashflows(aggregate):
            events.append(TradeMatured(payment.trade_id))
        envelopes = self._store.append(
            trade_stream_id(payment.trade_id), aggregate.version, events, self._now()
        )
        self._apply_irs(envelopes)

    def _total_cashflows(self, aggregate: IrsAggregate) -> int:
        product = aggregate.state.trade.tradable_product.product
        total = 0
        for leg in (fixed_leg(product), floating_leg(product)):
            if leg is not None:
                total += len(generate_schedule(leg.periods))
        return total
