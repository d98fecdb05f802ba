"""Lifecycle process functions: date adjustment, schedule generation, day-count
fractions, cashflow amounts, rate observation, business-event creation, and
deadline projection.

Day-count fractions are exact rationals (``fractions.Fraction``) so that
year-fraction arithmetic is associative and additive with no rounding drift;
currency amounts round half-up to 2 decimal places exactly once, at the end.
"""

from __future__ import annotations

import enum
import hashlib
import math
from dataclasses import dataclass, replace
from datetime import date, datetime, time, timedelta
from decimal import Decimal
from fractions import Fraction

from .errors import InvalidInterval, InvalidSchedule, InvalidTrade, InvalidTransition
from .model import (
    BusinessDayConvention,
    BusinessEvent,
    CalculationPeriodDates,
    ContractFormationPrimitive,
    DayCountConvention,
    ExecutionPrimitive,
    FloatingRate,
    HolidayCalendar,
    InterestRatePayout,
    ResetPrimitive,
    ResetRecord,
    Trade,
    TradeState,
    TradeStatus,
    Transfer,
    TransferPrimitive,
    TransferStatus,
    add_months,
    fixed_leg,
    floating_leg,
    months_between,
    qualify_business_event,
    validate_tradable_product,
)


@dataclass(frozen=True)
class CalculationPeriod:
    """One accrual period of a payment schedule. Payment falls on the adjusted
    period end; consecutive periods tile the term with no gaps."""

    unadjusted_start: date
    unadjusted_end: date
    adjusted_start: date
    adjusted_end: date
    payment_date: date
    period_index: int


@dataclass(frozen=True)
class Observation:
    """A floating-rate fixing observed for an index/tenor on a date."""

    index: str
    tenor_months: int
    observation_date: date
    rate: Decimal


class DeadlineKind(enum.Enum):
    RESET = "RESET"
    FIXED_PAYMENT = "FIXED_PAYMENT"
    FLOATING_PAYMENT = "FLOATING_PAYMENT"


#: Tie-break order for deadlines sharing a due time: resets fire before
#: payments, and fixed-leg payments before floating-leg ones.
KIND_ORDER = {
    DeadlineKind.RESET: 0,
    DeadlineKind.FIXED_PAYMENT: 1,
    DeadlineKind.FLOATING_PAYMENT: 2,
}


class DeadlineStatus(enum.Enum):
    OPEN = "OPEN"
    TRIGGERED = "TRIGGERED"


class LegKind(enum.Enum):
    FIXED = "FIXED"
    FLOATING = "FLOATING"


@dataclass(frozen=True)
class Deadline:
    """A scheduled future lifecycle action. ``due_time`` is fixed at creation;
    the only status transition is OPEN -> TRIGGERED."""

    deadline_id: str
    trade_id: str
    due_time: datetime
    kind: DeadlineKind
    period_index: int
    status: DeadlineStatus = DeadlineStatus.OPEN


def deadline_sort_key(d: Deadline) -> tuple[datetime, int, int]:
    return (d.due_time, KIND_ORDER[d.kind], d.period_index)


def make_deadline_id(trade_id: str, kind: DeadlineKind, period_index: int) -> str:
    slug = kind.value.lower().replace("_", "-")
    return f"{trade_id}.deadline.{slug}.{period_index}"


def is_business_day(d: date, calendar: HolidayCalendar) -> bool:
    if calendar is HolidayCalendar.NO_HOLIDAYS:
        return True
    return d.weekday() < 5


def adjust_date(d: date, convention: BusinessDayConvention, calendar: HolidayCalendar) -> date:
    """Roll a date onto a good business day per the convention.

    FOLLOWING rolls forward; MODIFIED_FOLLOWING rolls forward unless that
    crosses into the next month, in which case it rolls backward instead.
    """
    if convention is BusinessDayConvention.NONE:
        return d
    rolled = d
    while not is_business_day(rolled, calendar):
        rolled += timedelta(days=1)
    if convention is BusinessDayConvention.FOLLOWING:
        return rolled
    if rolled.month == d.month and rolled.year == d.year:
        return rolled
    rolled = d
    while not is_business_day(rolled, calendar):
        rolled -= timedelta(days=1)
    return rolled


def generate_schedule(dates: CalculationPeriodDates) -> list[CalculationPeriod]:
    """Generate the calculation periods for one leg.

    Unadjusted boundaries roll forward from the effective date by the payment
    frequency; each boundary is then business-day adjusted independently.
    """
    effective, termination = dates.effective_date, dates.termination_date
    if effective >= termination:
        raise InvalidSchedule("effective date must precede termination date")
    span = months_between(effective, termination)
    if add_months(effective, span) != termination:
        raise InvalidSchedule("termination date is not a whole number of months after the effective date")
    step = dates.frequency.months
    if span % step != 0:
        raise InvalidSchedule(f"term of {span} months is not a multiple of the {step}-month frequency")
    periods = []
    for i in range(span // step):
        unadjusted_start = add_months(effective, i * step)
        unadjusted_end = add_months(effective, (i + 1) * step)
        adjusted_start = adjust_date(unadjusted_start, dates.business_day_convention, dates.calendar)
        adjusted_end = adjust_date(unadjusted_end, dates.business_day_convention, dates.calendar)
        periods.append(
            CalculationPeriod(
                unadjusted_start=unadjusted_start,
                unadjusted_end=unadjusted_end,
                adjusted_start=adjusted_start,
                adjusted_end=adjusted_end,
                payment_date=adjusted_end,
                period_index=i,
            )
        )
    return periods


def day_count_fraction(start: date, end: date, convention: DayCountConvention) -> Fraction:
    """Year fraction between two dates under a day-count convention.

    Returned as an exact rational so ACT fractions add without rounding:
    dcf(a,b) + dcf(b,c) == dcf(a,c).
    """
    if start > end:
        raise InvalidInterval(f"start {start} is after end {end}")
    if convention is DayCountConvention.ACT_360:
        return Fraction((end - start).days, 360)
    if convention is DayCountConvention.ACT_365F:
        return Fraction((end - start).days, 365)
    # 30/360 US: start day 31 counts as 30; end day 31 counts as 30 only when
    # the (capped) start day is already 30.
    d1, d2 = start.day, end.day
    if d1 == 31:
        d1 = 30
    if d2 == 31 and d1 >= 30:
        d2 = 30
    days = 360 * (end.year - start.year) + 30 * (end.month - start.month) + (d2 - d1)
    return Fraction(days, 360)


def round_half_up(value: Fraction | Decimal | int, places: int = 2) -> Decimal:
    """Round to ``places`` decimals, ties away from zero, exactly."""
    exact = Fraction(value) * 10**places
    if exact >= 0:
        units = math.floor(exact + Fraction(1, 2))
    else:
        units = -math.floor(-exact + Fraction(1, 2))
    return Decimal(units).scaleb(-places)


def fixed_amount(notional: Decimal, rate: Decimal, dcf: Fraction | Decimal) -> Decimal:
    """Fixed-leg cashflow: notional x rate x year-fraction, in currency cents."""
    return round_half_up(Fraction(notional) * Fraction(rate) * Fraction(dcf))


def floating_amount(
    notional: Decimal, observed_rate: Decimal, spread: Decimal, dcf: Fraction | Decimal
) -> Decimal:
    """Floating-leg cashflow: notional x (observed rate + spread) x year-fraction."""
    rate = Fraction(observed_rate) + Fraction(spread)
    return round_half_up(Fraction(notional) * rate * Fraction(dcf))


#: Observed rates are uniform on [0, RATE_CEILING) quantised to 5 decimals.
RATE_CEILING = Decimal("0.10")
_RATE_UNITS = 10_000  # grid points of 0.00001 below the ceiling


def resolve_observation(
    index: str, tenor_months: int, observation_date: date, seed: int
) -> Observation:
    """Simulated market-data lookup for a floating-rate fixing.

    A pure function of its inputs: the rate is derived from a SHA-256 hash of
    (seed, index, tenor, date), mapped uniformly into [0.0, 0.10) and quantised
    to 5 decimal places. Same inputs always produce the same rate, so replays
    and reruns of a simulation reproduce identical fixings.
    """
    if tenor_months <= 0:
        raise InvalidTrade(f"tenor must be positive, got {tenor_months}")
    key = f"{seed}|{index}|{tenor_months}|{observation_date.isoformat()}"
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    draw = int.from_bytes(digest[:8], "big")
    units = (draw * _RATE_UNITS) >> 64
    rate = Decimal(units).scaleb(-5).quantize(Decimal("0.00001"))
    return Observation(index=index, tenor_months=tenor_months, observation_date=observation_date, rate=rate)


def create_execution_event(trade: Trade, event_time: datetime) -> BusinessEvent:
    """Create the execution business event for a newly agreed trade."""
    report = validate_tradable_product(trade.tradable_product)
    if not report.is_valid:
        raise InvalidTrade(
            "trade failed validation: " + "; ".join(report.violations),
            details={"violations": list(report.violations)},
        )
    for payout in trade.tradable_product.product.payouts:
        if isinstance(payout, InterestRatePayout) and trade.trade_date > payout.periods.effective_date:
            raise InvalidTrade("trade date is after a payout's effective date")
    after = TradeState(trade=trade, status=TradeStatus.EXECUTED)
    primitive = ExecutionPrimitive(after=after)
    return BusinessEvent(
        event_id=f"{trade.trade_id}.execution",
        event_date=event_time,
        primitives=(primitive,),
        qualified_type=qualify_business_event([primitive]),
    )


def create_contract_formation_event(current: TradeState, event_time: datetime) -> BusinessEvent:
    """Confirm an executed trade, forming the contract."""
    if current.status is not TradeStatus.EXECUTED:
        raise InvalidTransition(f"cannot confirm a trade in status {current.status.value}")
    after = replace(current, status=TradeStatus.CONFIRMED)
    primitive = ContractFormationPrimitive(before=current, after=after)
    return BusinessEvent(
        event_id=f"{current.trade.trade_id}.contract-formation",
        event_date=event_time,
        primitives=(primitive,),
        qualified_type=qualify_business_event([primitive]),
    )


def create_reset_event(
    current: TradeState, observation: Observation, event_time: datetime
) -> BusinessEvent:
    """Apply a floating-rate fixing to a confirmed trade."""
    if current.status is not TradeStatus.CONFIRMED:
        raise InvalidTransition(f"cannot reset a trade in status {current.status.value}")
    leg = floating_leg(current.trade.tradable_product.product)
    if leg is None:
        raise InvalidTransition("trade has no floating payout to reset")
    assert isinstance(leg.rate, FloatingRate)
    if leg.rate.index != observation.index or leg.rate.tenor_months != observation.tenor_months:
        raise InvalidTransition(
            f"observation {observation.index} {observation.tenor_months}M does not match "
            f"the floating payout {leg.rate.index} {leg.rate.tenor_months}M"
        )
    record = ResetRecord(
        reset_date=observation.observation_date,
        index=observation.index,
        tenor_months=observation.tenor_months,
        observed_rate=observation.rate,
    )
    after = replace(current, reset_history=current.reset_history + (record,))
    primitive = ResetPrimitive(before=current, after=after)
    return BusinessEvent(
        event_id=f"{current.trade.trade_id}.reset.{len(current.reset_history)}",
        event_date=event_time,
        primitives=(primitive,),
        qualified_type=qualify_business_event([primitive]),
    )


def create_cash_transfer_event(
    current: TradeState, transfer: Transfer, event_time: datetime
) -> BusinessEvent:
    """Record a settled cash payment between the trade's counterparties."""
    if current.status is not TradeStatus.CONFIRMED:
        raise InvalidTransition(f"cannot pay on a trade in status {current.status.value}")
    refs = current.trade.tradable_product.party_refs()
    if transfer.payer_party_ref not in refs or transfer.receiver_party_ref not in refs:
        raise InvalidTransition("transfer names a party outside the trade's counterparties")
    if transfer.payer_party_ref == transfer.receiver_party_ref:
        raise InvalidTransition("transfer payer equals receiver")
    if transfer.amount < 0:
        raise InvalidTransition("transfer amount must be non-negative")
    settled = replace(transfer, status=TransferStatus.SETTLED)
    after = replace(current, transfer_history=current.transfer_history + (settled,))
    primitive = TransferPrimitive(before=current, after=after)
    return BusinessEvent(
        event_id=f"{current.trade.trade_id}.cash-transfer.{len(current.transfer_history)}",
        event_date=event_time,
        primitives=(primitive,),
        qualified_type=qualify_business_event([primitive]),
    )


def _midnight(d: date) -> datetime:
    return datetime.combine(d, time.min)


def project_deadlines(state: TradeState) -> list[Deadline]:
    """Enumerate every future lifecycle action for a confirmed trade.

    Each floating-leg period contributes a reset deadline at its adjusted start
    (in-advance fixing) and a payment deadline at its payment date; each
    fixed-leg period contributes a payment deadline. Due times fall at midnight
    of the relevant date. Sorted by (due time, kind, period index).
    """
    if state.status is not TradeStatus.CONFIRMED:
        raise InvalidTransition(f"cannot project deadlines for status {state.status.value}")
    trade_id = state.trade.trade_id
    product = state.trade.tradable_product.product
    deadlines: list[Deadline] = []

    def _deadline(kind: DeadlineKind, due: date, index: int) -> Deadline:
        return Deadline(
            deadline_id=make_deadline_id(trade_id, kind, index),
            trade_id=trade_id,
            due_time=_midnight(due),
            kind=kind,
            period_index=index,
        )

    floating = floating_leg(product)
    if floating is not None:
        for period in generate_schedule(floating.periods):
            deadlines.append(_deadline(DeadlineKind.RESET, period.adjusted_start, period.period_index))
            deadlines.append(
                _deadline(DeadlineKind.FLOATING_PAYMENT, period.payment_date, period.period_index)
            )
    fixed = fixed_leg(product)
    if fixed is not None:
        for period in generate_schedule(fixed.periods):
            deadlines.append(
                _deadline(DeadlineKind.FIXED_PAYMENT, period.payment_date, period.period_index)
            )
    deadlines.sort(key=deadline_sort_key)
    return deadlines
