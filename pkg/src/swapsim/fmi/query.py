"""Query side: materialized read views folded from the event log.

The ``QueryService`` subscribes to the store and projects every envelope into
three views: a trade blotter (economics, status, realized and projected
cashflows per trade), a rolling event stream (newest first, optionally
CDM-only), and the next open deadline. Projection is idempotent per global
sequence, and ``rebuild`` from an empty state over the full log lands on
exactly the state reached live.

Party display names are resolved against the registry when the execution is
projected, so the blotter keeps the name as of that moment.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import date, datetime
from decimal import Decimal

from ..errors import NotFound
from ..events import (
    CashTransferred,
    ClockAdvanced,
    ClockCreated,
    DeadlineBreached,
    DeadlineCancelled,
    DeadlineScheduled,
    ExecutionOccurred,
    FailedLifecycleAction,
    PaymentInstructed,
    PaymentSettled,
    RateReset,
    TradeConfirmed,
    TradeMatured,
    TradeRejected,
)
from ..eventstore import EventEnvelope, InMemoryEventStore, SubscriptionFilter
from ..lifecycle import (
    Deadline,
    DeadlineKind,
    LegKind,
    day_count_fraction,
    deadline_sort_key,
    fixed_amount,
    floating_amount,
    generate_schedule,
)
from ..model import (
    CounterpartyRole,
    FixedRate,
    FloatingRate,
    ProductQualification,
    Trade,
    TradeStatus,
    fixed_leg,
    floating_leg,
    qualify_product,
)
from ..registry import PartyRegistry

#: The single operator action a trade can have open (while awaiting consent).
CONFIRM_EXECUTION_ACTION = "ConfirmExecution"


@dataclass(frozen=True)
class ProjectedCashflowRow:
    """One scheduled cashflow. ``amount`` is absent for a floating period
    whose fixing has not happened yet."""

    payment_date: date
    leg_kind: LegKind
    period_index: int
    currency: str
    amount: Decimal | None
    rate: Decimal | None

    def to_json(self) -> dict:
        return {
            "date": self.payment_date.isoformat(),
            "legKind": self.leg_kind.value,
            "periodIndex": self.period_index,
            "currency": self.currency,
            "amount": None if self.amount is None else str(self.amount),
            "rate": None if self.rate is None else str(self.rate),
        }


@dataclass(frozen=True)
class CashflowRow:
    """One realized cashflow, recorded when its transfer settles."""

    payment_date: date
    leg_kind: LegKind
    period_index: int
    currency: str
    amount: Decimal
    direction: str  # PARTY1_TO_PARTY2 | PARTY2_TO_PARTY1
    settled: bool

    def to_json(self) -> dict:
        return {
            "date": self.payment_date.isoformat(),
            "legKind": self.leg_kind.value,
            "periodIndex": self.period_index,
            "currency": self.currency,
            "amount": str(self.amount),
            "direction": self.direction,
            "settled": self.settled,
        }


@dataclass(frozen=True)
class BlotterRow:
    trade_id: str
    counterparty_names: tuple[str, str]
    product_type: ProductQualification
    status: TradeStatus
    trade_date: date
    effective_date: date | None
    termination_date: date | None
    notional: Decimal | None
    currency: str | None
    fixed_rate: Decimal | None
    floating_index: str | None
    floating_tenor_months: int | None
    floating_spread: Decimal | None
    open_actions: tuple[str, ...]
    cashflows: tuple[CashflowRow, ...]
    projected_cashflows: tuple[ProjectedCashflowRow, ...]
    updated_at: datetime

    def to_json(self) -> dict:
        return {
            "tradeId": self.trade_id,
            "counterpartyNames": list(self.counterparty_names),
            "productType": self.product_type.value,
            "status": self.status.value,
            "tradeDate": self.trade_date.isoformat(),
            "effectiveDate": None if self.effective_date is None else self.effective_date.isoformat(),
            "terminationDate": None if self.termination_date is None else self.termination_date.isoformat(),
            "notional": None if self.notional is None else str(self.notional),
            "currency": self.currency,
            "fixedRate": None if self.fixed_rate is None else str(self.fixed_rate),
            "floatingIndex": self.floating_index,
            "floatingTenorMonths": self.floating_tenor_months,
            "floatingSpread": None if self.floating_spread is None else str(self.floating_spread),
            "openActions": list(self.open_actions),
            "cashflows": [c.to_json() for c in self.cashflows],
            "projectedCashflows": [c.to_json() for c in self.projected_cashflows],
            "updatedAt": self.updated_at.isoformat(),
        }


@dataclass(frozen=True)
class EventStreamRow:
    global_sequence: int
    simulator_event_name: str
    aggregate_id: str
    simulation_time: datetime
    cdm_event_type: str | None
    description: str

    @property
    def is_cdm(self) -> bool:
        return self.cdm_event_type is not None

    def to_json(self) -> dict:
        return {
            "globalSequence": self.global_sequence,
            "simulatorEventName": self.simulator_event_name,
            "aggregateId": self.aggregate_id,
            "simulationTime": self.simulation_time.isoformat(),
            "cdmEventType": self.cdm_event_type,
            "description": self.description,
        }


_KIND_LABEL = {
    DeadlineKind.RESET: ("Reset", "floating"),
    DeadlineKind.FIXED_PAYMENT: ("FixedPayment", "fixed"),
    DeadlineKind.FLOATING_PAYMENT: ("FloatingPayment", "floating"),
}


def deadline_display_name(deadline: Deadline) -> str:
    kind, leg = _KIND_LABEL[deadline.kind]
    return f"{kind} period {deadline.period_index} ({leg})"


@dataclass(frozen=True)
class NextDeadlineView:
    deadline: Deadline
    name: str

    def to_json(self) -> dict:
        return {
            "deadline": {
                "name": self.name,
                "dueTime": self.deadline.due_time.isoformat(),
                "deadlineId": self.deadline.deadline_id,
                "tradeId": self.deadline.trade_id,
                "kind": self.deadline.kind.value,
                "periodIndex": self.deadline.period_index,
            }
        }


@dataclass
class _TradeProjection:
    trade: Trade
    status: TradeStatus
    product_type: ProductQualification
    party1_name: str
    party2_name: str
    direction_by_payer: dict[str, str]
    cashflows: list[CashflowRow] = field(default_factory=list)
    projected: list[ProjectedCashflowRow] = field(default_factory=list)
    updated_at: datetime | None = None


class QueryService:
    """Projects the event log into operator-facing read views."""

    def __init__(self, store: InMemoryEventStore, registry: PartyRegistry) -> None:
        self._store = store
        self._registry = registry
        self._last_sequence = 0
        self._trades: dict[str, _TradeProjection] = {}
        self._order: list[str] = []
        self._stream: list[EventStreamRow] = []
        self._open_deadlines: dict[str, Deadline] = {}
        store.subscribe(SubscriptionFilter(), self._on_envelope)

    # -- projection -----------------------------------------------------------

    def _on_envelope(self, envelope: EventEnvelope) -> None:
        if envelope.global_sequence <= self._last_sequence:
            return
        self._last_sequence = envelope.global_sequence
        self._project(envelope)

    def clear(self) -> None:
        self._last_sequence = 0
        self._trades.clear()
        self._order.clear()
        self._stream.clear()
        self._open_deadlines.clear()

    def rebuild(self) -> None:
        """Refold every stored envelope from scratch."""
        self.clear()
        for envelope in self._store.read_all():
            self._last_sequence = envelope.global_sequence
            self._project(envelope)

    def _party_name(self, party_ref: str) -> str:
        party = self._registry.maybe_get(party_ref)
        return party.name if party is not None else party_ref

    def _project(self, envelope: EventEnvelope) -> None:
        event = envelope.decode()
        cdm_type: str | None = None

        if isinstance(event, ExecutionOccurred):
            state = event.business_event.after
            trade = state.trade
            tp = trade.tradable_product
            roles = {cp.role: cp.party_ref for cp in tp.counterparties}
            direction_by_payer = {
                roles[CounterpartyRole.PARTY_1]: "PARTY1_TO_PARTY2",
                roles[CounterpartyRole.PARTY_2]: "PARTY2_TO_PARTY1",
            }
            projection = _TradeProjection(
                trade=trade,
                status=state.status,
                product_type=qualify_product(tp.product),
                party1_name=self._party_name(roles[CounterpartyRole.PARTY_1]),
                party2_name=self._party_name(roles[CounterpartyRole.PARTY_2]),
                direction_by_payer=direction_by_payer,
            )
            projection.projected = self._initial_projection(trade)
            projection.updated_at = envelope.simulation_time
            self._trades[trade.trade_id] = projection
            if trade.trade_id not in self._order:
                self._order.append(trade.trade_id)
            cdm_type = event.business_event.qualified_type.value
            description = f"Trade {trade.trade_id} executed"

        elif isinstance(event, TradeConfirmed):
            trade_id = event.business_event.after.trade.trade_id
            projection = self._touch(trade_id, envelope)
            if projection is not None:
                projection.status = TradeStatus.CONFIRMED
            cdm_type = event.business_event.qualified_type.value
            description = f"Trade {trade_id} confirmed"

        elif isinstance(event, TradeRejected):
            projection = self._touch(event.trade_id, envelope)
            if projection is not None:
                projection.status = TradeStatus.REJECTED
            description = f"Trade {event.trade_id} rejected"

        elif isinstance(event, RateReset):
            trade_id = event.business_event.after.trade.trade_id
            projection = self._touch(trade_id, envelope)
            record = event.business_event.after.reset_history[-1]
            if projection is not None:
                self._apply_reset(projection, event.period_index, record.observed_rate)
            cdm_type = event.business_event.qualified_type.value
            description = (
                f"Rate {record.observed_rate} fixed for period {event.period_index} "
                f"of {trade_id}"
            )

        elif isinstance(event, CashTransferred):
            trade_id = event.business_event.after.trade.trade_id
            projection = self._touch(trade_id, envelope)
            transfer = event.business_event.after.transfer_history[-1]
            if projection is not None:
                direction = projection.direction_by_payer.get(
                    transfer.payer_party_ref, "PARTY1_TO_PARTY2"
                )
                projection.cashflows.append(
                    CashflowRow(
                        payment_date=transfer.settlement_date,
                        leg_kind=event.leg_kind,
                        period_index=event.period_index,
                        currency=transfer.currency,
                        amount=transfer.amount,
                        direction=direction,
                        settled=True,
                    )
                )
            cdm_type = event.business_event.qualified_type.value
            description = (
                f"{transfer.amount} {transfer.currency} settled for "
                f"{event.leg_kind.value.lower()} period {event.period_index} of {trade_id}"
            )

        elif isinstance(event, TradeMatured):
            projection = self._touch(event.trade_id, envelope)
            if projection is not None:
                projection.status = TradeStatus.MATURED
            description = f"Trade {event.trade_id} matured"

        elif isinstance(event, DeadlineScheduled):
            self._open_deadlines[event.deadline.deadline_id] = event.deadline
            description = f"Scheduled {deadline_display_name(event.deadline)} for {event.deadline.trade_id}"

        elif isinstance(event, DeadlineBreached):
            self._open_deadlines.pop(event.deadline.deadline_id, None)
            description = f"Breached {deadline_display_name(event.deadline)} for {event.deadline.trade_id}"

        elif isinstance(event, DeadlineCancelled):
            self._open_deadlines.pop(event.deadline_id, None)
            description = f"Cancelled deadline {event.deadline_id}"

        elif isinstance(event, FailedLifecycleAction):
            description = (
                f"{event.action} failed for {event.trade_id} ({event.error_code}: {event.message})"
            )

        elif isinstance(event, PaymentInstructed):
            description = (
                f"Payment of {event.transfer.amount} {event.transfer.currency} instructed "
                f"({event.transfer.transfer_id})"
            )

        elif isinstance(event, PaymentSettled):
            description = f"Payment {event.transfer_id} settled"

        elif isinstance(event, ClockCreated):
            description = f"Clock created at {event.initial_time.isoformat()}"

        elif isinstance(event, ClockAdvanced):
            description = f"Clock advanced to {event.time.isoformat()}"

        else:
            description = envelope.event_type

        self._stream.append(
            EventStreamRow(
                global_sequence=envelope.global_sequence,
                simulator_event_name=envelope.event_type,
                aggregate_id=envelope.aggregate_id,
                simulation_time=envelope.simulation_time,
                cdm_event_type=cdm_type,
                description=description,
            )
        )

    def _touch(self, trade_id: str, envelope: EventEnvelope) -> _TradeProjection | None:
        """Look up a trade's projection, stamping its update time. Absent
        projections (an event for a trade this view never saw executed) are
        tolerated: the stream row is still recorded, the blotter is not."""
        projection = self._trades.get(trade_id)
        if projection is not None:
            projection.updated_at = envelope.simulation_time
        return projection

    def _initial_projection(self, trade: Trade) -> list[ProjectedCashflowRow]:
        product = trade.tradable_product.product
        rows: list[ProjectedCashflowRow] = []
        fixed = fixed_leg(product)
        if fixed is not None:
            assert isinstance(fixed.rate, FixedRate)
            for period in generate_schedule(fixed.periods):
                dcf = day_count_fraction(period.adjusted_start, period.adjusted_end, fixed.day_count)
                rows.append(
                    ProjectedCashflowRow(
                        payment_date=period.payment_date,
                        leg_kind=LegKind.FIXED,
                        period_index=period.period_index,
                        currency=fixed.currency,
                        amount=fixed_amount(fixed.notional, fixed.rate.rate, dcf),
                        rate=fixed.rate.rate,
                    )
                )
        floating = floating_leg(product)
        if floating is not None:
            for period in generate_schedule(floating.periods):
                rows.append(
                    ProjectedCashflowRow(
                        payment_date=period.payment_date,
                        leg_kind=LegKind.FLOATING,
                        period_index=period.period_index,
                        currency=floating.currency,
                        amount=None,
                        rate=None,
                    )
                )
        rows.sort(key=lambda r: (r.payment_date, r.leg_kind.value, r.period_index))
        return rows

    def _apply_reset(self, projection: _TradeProjection, period_index: int, rate: Decimal) -> None:
        product = projection.trade.tradable_product.product
        floating = floating_leg(product)
        if floating is None:
            return
        assert isinstance(floating.rate, FloatingRate)
        schedule = generate_schedule(floating.periods)
        if period_index >= len(schedule):
            return
        period = schedule[period_index]
        dcf = day_count_fraction(period.adjusted_start, period.adjusted_end, floating.day_count)
        amount = floating_amount(floating.notional, rate, floating.rate.spread, dcf)
        for i, row in enumerate(projection.projected):
            if row.leg_kind is LegKind.FLOATING and row.period_index == period_index:
                projection.projected[i] = replace(
                    row, amount=amount, rate=rate + floating.rate.spread
                )
                return

    # -- queries ---------------------------------------------------------------

    def _row(self, trade_id: str) -> BlotterRow:
        projection = self._trades[trade_id]
        product = projection.trade.tradable_product.product
        fixed = fixed_leg(product)
        floating = floating_leg(product)
        leg = fixed or floating
        open_actions: tuple[str, ...] = (
            (CONFIRM_EXECUTION_ACTION,) if projection.status is TradeStatus.EXECUTED else ()
        )
        floating_rate = floating.rate if floating is not None else None
        assert floating_rate is None or isinstance(floating_rate, FloatingRate)
        fixed_rate_value = None
        if fixed is not None:
            assert isinstance(fixed.rate, FixedRate)
            fixed_rate_value = fixed.rate.rate
        return BlotterRow(
            trade_id=trade_id,
            counterparty_names=(projection.party1_name, projection.party2_name),
            product_type=projection.product_type,
            status=projection.status,
            trade_date=projection.trade.trade_date,
            effective_date=leg.periods.effective_date if leg is not None else None,
            termination_date=leg.periods.termination_date if leg is not None else None,
            notional=leg.notional if leg is not None else None,
            currency=leg.currency if leg is not None else None,
            fixed_rate=fixed_rate_value,
            floating_index=floating_rate.index if floating_rate is not None else None,
            floating_tenor_months=floating_rate.tenor_months if floating_rate is not None else None,
            floating_spread=floating_rate.spread if floating_rate is not None else None,
            open_actions=open_actions,
            cashflows=tuple(projection.cashflows),
            projected_cashflows=tuple(projection.projected),
            updated_at=projection.updated_at,
        )

    def blotter(self) -> list[BlotterRow]:
        return [self._row(trade_id) for trade_id in self._order]

    def trade(self, trade_id: str) -> BlotterRow:
        if trade_id not in self._trades:
            raise NotFound(f"no trade with id {trade_id!r}", details={"tradeId": trade_id})
        return self._row(trade_id)

    def event_stream(self, limit: int = 25, cdm_only: bool = False) -> list[EventStreamRow]:
        """The most recent events, newest first."""
        rows = self._stream
        if cdm_only:
            rows = [r for r in rows if r.is_cdm]
        if limit is not None and limit >= 0:
            rows = rows[-limit:] if limit else []
        return list(reversed(rows))

    def next_deadline(self) -> NextDeadlineView | None:
        if not self._open_deadlines:
            return None
        deadline = min(self._open_deadlines.values(), key=deadline_sort_key)
        return NextDeadlineView(deadline=deadline, name=deadline_display_name(deadline))

    def open_deadline_count(self) -> int:
        return len(self._open_deadlines)

    def last_projected_sequence(self) -> int:
        return self._last_sequence
