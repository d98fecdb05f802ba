"""Domain model for the swap lifecycle, mirroring the ISDA Common Domain Model's
product/event hierarchy at the scale this simulator needs.

Products are qualified by inference from their constituent payouts, and business
events are qualified from the primitive state transitions they contain. Every
type here is an immutable value; the evolving state of a trade is threaded
through ``PrimitiveEvent`` before/after pairs so the full lineage of a trade can
be checked mechanically.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import date, datetime
from decimal import Decimal
from typing import Union


class CounterpartyRole(enum.Enum):
    PARTY_1 = "PARTY_1"
    PARTY_2 = "PARTY_2"


class DayCountConvention(enum.Enum):
    ACT_360 = "ACT_360"
    ACT_365F = "ACT_365F"
    THIRTY_360_US = "THIRTY_360_US"


class PaymentFrequency(enum.Enum):
    MONTHLY = "MONTHLY"
    QUARTERLY = "QUARTERLY"
    SEMI_ANNUAL = "SEMI_ANNUAL"
    ANNUAL = "ANNUAL"

    @property
    def months(self) -> int:
        return _FREQUENCY_MONTHS[self]


_FREQUENCY_MONTHS = {
    PaymentFrequency.MONTHLY: 1,
    PaymentFrequency.QUARTERLY: 3,
    PaymentFrequency.SEMI_ANNUAL: 6,
    PaymentFrequency.ANNUAL: 12,
}


class BusinessDayConvention(enum.Enum):
    NONE = "NONE"
    FOLLOWING = "FOLLOWING"
    MODIFIED_FOLLOWING = "MODIFIED_FOLLOWING"


class HolidayCalendar(enum.Enum):
    NO_HOLIDAYS = "NO_HOLIDAYS"
    WEEKENDS_ONLY = "WEEKENDS_ONLY"


class ProductQualification(enum.Enum):
    INTEREST_RATE_SWAP_FIXED_FLOAT = "INTEREST_RATE_SWAP_FIXED_FLOAT"
    INTEREST_RATE_BASIS_SWAP = "INTEREST_RATE_BASIS_SWAP"
    EQUITY_SWAP = "EQUITY_SWAP"
    UNQUALIFIED = "UNQUALIFIED"


class BusinessEventType(enum.Enum):
    EXECUTION = "EXECUTION"
    CONTRACT_FORMATION = "CONTRACT_FORMATION"
    RESET = "RESET"
    CASH_TRANSFER = "CASH_TRANSFER"
    UNQUALIFIED = "UNQUALIFIED"


class TradeStatus(enum.Enum):
    EXECUTED = "EXECUTED"
    CONFIRMED = "CONFIRMED"
    REJECTED = "REJECTED"
    MATURED = "MATURED"


#: The only legal status transitions.
STATUS_TRANSITIONS = {
    (TradeStatus.EXECUTED, TradeStatus.CONFIRMED),
    (TradeStatus.EXECUTED, TradeStatus.REJECTED),
    (TradeStatus.CONFIRMED, TradeStatus.MATURED),
}


class TransferStatus(enum.Enum):
    INSTRUCTED = "INSTRUCTED"
    SETTLED = "SETTLED"


@dataclass(frozen=True)
class Party:
    """A counterparty registered on the network."""

    party_id: str
    name: str
    legal_entity_id: str


@dataclass(frozen=True)
class Counterparty:
    party_ref: str
    role: CounterpartyRole


@dataclass(frozen=True)
class FixedRate:
    """Fixed leg rate, as a decimal fraction per annum."""

    rate: Decimal


@dataclass(frozen=True)
class FloatingRate:
    """Floating leg rate: an index observed at each reset, plus a spread."""

    index: str
    tenor_months: int
    spread: Decimal = Decimal("0")


RateSpecification = Union[FixedRate, FloatingRate]


@dataclass(frozen=True)
class CalculationPeriodDates:
    """The date parameters from which a leg's payment schedule is generated."""

    effective_date: date
    termination_date: date
    frequency: PaymentFrequency
    business_day_convention: BusinessDayConvention = BusinessDayConvention.NONE
    calendar: HolidayCalendar = HolidayCalendar.NO_HOLIDAYS


@dataclass(frozen=True)
class InterestRatePayout:
    """One leg of a swap: a stream of interest payments on a notional."""

    payer_party_ref: str
    receiver_party_ref: str
    notional: Decimal
    currency: str
    rate: RateSpecification
    day_count: DayCountConvention
    periods: CalculationPeriodDates


@dataclass(frozen=True)
class EquityPayout:
    """Equity return leg. Exists so product qualification has a second payout
    family to infer against; it carries no lifecycle behaviour here."""

    payer_party_ref: str
    receiver_party_ref: str
    underlier: str


Payout = Union[InterestRatePayout, EquityPayout]


@dataclass(frozen=True)
class Product:
    payouts: tuple[Payout, ...]


@dataclass(frozen=True)
class PriceQuantity:
    """Display summary of one payout's economic terms."""

    notional: Decimal | None
    currency: str | None
    rate_description: str


@dataclass(frozen=True)
class TradableProduct:
    """An executable product together with its two counterparties."""

    product: Product
    counterparties: tuple[Counterparty, Counterparty]

    @property
    def price_quantity_summary(self) -> tuple[PriceQuantity, ...]:
        """Derived notional/rate view of each payout, for display."""
        out = []
        for payout in self.product.payouts:
            if isinstance(payout, InterestRatePayout):
                if isinstance(payout.rate, FixedRate):
                    desc = f"fixed {payout.rate.rate}"
                else:
                    desc = f"{payout.rate.index} {payout.rate.tenor_months}M + {payout.rate.spread}"
                out.append(PriceQuantity(payout.notional, payout.currency, desc))
            else:
                out.append(PriceQuantity(None, None, f"equity {payout.underlier}"))
        return tuple(out)

    def party_refs(self) -> frozenset[str]:
        return frozenset(cp.party_ref for cp in self.counterparties)


@dataclass(frozen=True)
class Trade:
    trade_id: str
    trade_date: date
    tradable_product: TradableProduct


@dataclass(frozen=True)
class ResetRecord:
    """One applied floating-rate fixing, as recorded on the trade state."""

    reset_date: date
    index: str
    tenor_months: int
    observed_rate: Decimal


@dataclass(frozen=True)
class Transfer:
    """A cash payment obligation between the two parties."""

    transfer_id: str
    payer_party_ref: str
    receiver_party_ref: str
    amount: Decimal
    currency: str
    settlement_date: date
    status: TransferStatus


@dataclass(frozen=True)
class TradeState:
    """The full state of one trade at a point in its lifecycle.

    ``reset_history`` and ``transfer_history`` are append-only: lifecycle events
    produce new states with one record appended, never mutate or reorder.
    """

    trade: Trade
    status: TradeStatus
    reset_history: tuple[ResetRecord, ...] = ()
    transfer_history: tuple[Transfer, ...] = ()


@dataclass(frozen=True)
class ExecutionPrimitive:
    """Creation of a trade; the only primitive without a prior state."""

    after: TradeState
    before: None = None


@dataclass(frozen=True)
class ContractFormationPrimitive:
    before: TradeState
    after: TradeState


@dataclass(frozen=True)
class ResetPrimitive:
    before: TradeState
    after: TradeState


@dataclass(frozen=True)
class TransferPrimitive:
    before: TradeState
    after: TradeState


PrimitiveEvent = Union[
    ExecutionPrimitive, ContractFormationPrimitive, ResetPrimitive, TransferPrimitive
]


@dataclass(frozen=True)
class BusinessEvent:
    """An atomic lifecycle event: one or more primitives that occur together.

    ``qualified_type`` is always the result of re-running
    :func:`qualify_business_event` over ``primitives``.
    """

    event_id: str
    event_date: datetime
    primitives: tuple[PrimitiveEvent, ...]
    qualified_type: BusinessEventType
    intent: str | None = None

    def __post_init__(self) -> None:
        if not self.primitives:
            raise ValueError("a business event must contain at least one primitive")

    @property
    def before(self) -> TradeState | None:
        return self.primitives[0].before

    @property
    def after(self) -> TradeState:
        return self.primitives[-1].after


def qualify_product(product: Product) -> ProductQualification:
    """Infer the product type from its payout composition.

    Pure and order-insensitive: permuting the payout list never changes the
    result. Anything outside the three known compositions is ``UNQUALIFIED``
    (a value, not an error).
    """
    irps = [p for p in product.payouts if isinstance(p, InterestRatePayout)]
    equities = [p for p in product.payouts if isinstance(p, EquityPayout)]
    if len(product.payouts) == 2 and len(irps) == 2:
        fixed = sum(isinstance(p.rate, FixedRate) for p in irps)
        if fixed == 1:
            return ProductQualification.INTEREST_RATE_SWAP_FIXED_FLOAT
        if fixed == 0:
            return ProductQualification.INTEREST_RATE_BASIS_SWAP
        return ProductQualification.UNQUALIFIED
    if len(product.payouts) == 2 and len(irps) == 1 and len(equities) == 1:
        return ProductQualification.EQUITY_SWAP
    return ProductQualification.UNQUALIFIED


_PRIMITIVE_QUALIFICATION = {
    ExecutionPrimitive: BusinessEventType.EXECUTION,
    ContractFormationPrimitive: BusinessEventType.CONTRACT_FORMATION,
    ResetPrimitive: BusinessEventType.RESET,
    TransferPrimitive: BusinessEventType.CASH_TRANSFER,
}


def qualify_business_event(
    primitives: tuple[PrimitiveEvent, ...] | list[PrimitiveEvent],
    intent: str | None = None,
) -> BusinessEventType:
    """Infer the business event type from its primitives.

    Each in-scope event type is a single primitive of one kind; any other
    combination is ``UNQUALIFIED``. ``intent`` is carried for model fidelity
    but no in-scope qualification rule consults it.
    """
    del intent
    if not primitives:
        raise ValueError("cannot qualify an empty primitive list")
    if len(primitives) == 1:
        return _PRIMITIVE_QUALIFICATION.get(
            type(primitives[0]), BusinessEventType.UNQUALIFIED
        )
    return BusinessEventType.UNQUALIFIED


@dataclass(frozen=True)
class ValidationReport:
    """Zero or more rule violations; an empty report means valid."""

    violations: tuple[str, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations


def months_between(start: date, end: date) -> int:
    return (end.year - start.year) * 12 + (end.month - start.month)


def add_months(d: date, months: int) -> date:
    """Calendar-month addition with end-of-month day clamping."""
    total = d.year * 12 + (d.month - 1) + months
    year, month0 = divmod(total, 12)
    month = month0 + 1
    day = min(d.day, _days_in_month(year, month))
    return date(year, month, day)


def _days_in_month(year: int, month: int) -> int:
    if month == 12:
        return 31
    return (date(year, month + 1, 1) - date(year, month, 1)).days


def validate_tradable_product(tp: TradableProduct) -> ValidationReport:
    """Check a tradable product against the submission rule set.

    Violations are data, not failures; callers decide whether to reject.
    """
    violations: list[str] = []
    refs = tp.party_refs()
    for i, payout in enumerate(tp.product.payouts):
        where = f"payout {i}"
        if payout.payer_party_ref not in refs:
            violations.append(f"{where}: unresolved party reference {payout.payer_party_ref!r}")
        if payout.receiver_party_ref not in refs:
            violations.append(f"{where}: unresolved party reference {payout.receiver_party_ref!r}")
        if payout.payer_party_ref == payout.receiver_party_ref:
            violations.append(f"{where}: payer equals receiver")
        if isinstance(payout, InterestRatePayout):
            if payout.notional <= 0:
                violations.append(f"{where}: notional must be positive")
            periods = payout.periods
            if periods.effective_date >= periods.termination_date:
                violations.append(
                    f"{where}: effective date must precede termination date"
                )
            else:
                span = months_between(periods.effective_date, periods.termination_date)
                aligned = add_months(periods.effective_date, span) == periods.termination_date
                if not aligned or span % periods.frequency.months != 0:
                    violations.append(
                        f"{where}: term is not a whole multiple of the payment frequency"
                    )
    roles = sorted(cp.role.value for cp in tp.counterparties)
    if roles != [CounterpartyRole.PARTY_1.value, CounterpartyRole.PARTY_2.value]:
        violations.append("counterparties must be exactly one PARTY_1 and one PARTY_2")
    if len(refs) != 2:
        violations.append("the two counterparty references must differ")
    return ValidationReport(tuple(violations))


@dataclass(frozen=True)
class LineageReport:
    """Result of a lineage check; ``break_index`` is the position (in the
    flattened primitive sequence) of the first broken link."""

    ok: bool
    break_index: int | None = None


def check_lineage(events: list[BusinessEvent] | tuple[BusinessEvent, ...]) -> LineageReport:
    """Verify the before/after chain across a trade's ordered business events.

    Flattens primitives across events; the first must be an execution, and each
    subsequent primitive's ``before`` must equal the preceding ``after``
    field-for-field.
    """
    primitives: list[PrimitiveEvent] = []
    for event in events:
        primitives.extend(event.primitives)
    previous: TradeState | None = None
    for i, primitive in enumerate(primitives):
        if i == 0:
            if not isinstance(primitive, ExecutionPrimitive):
                return LineageReport(ok=False, break_index=0)
        elif primitive.before != previous:
            return LineageReport(ok=False, break_index=i)
        previous = primitive.after
    return LineageReport(ok=True)


def fixed_leg(product: Product) -> InterestRatePayout | None:
    """The first fixed-rate interest payout, if any."""
    for payout in product.payouts:
        if isinstance(payout, InterestRatePayout) and isinstance(payout.rate, FixedRate):
            return payout
    return None


def floating_leg(product: Product) -> InterestRatePayout | None:
    """The first floating-rate interest payout, if any."""
    for payout in product.payouts:
        if isinstance(payout, InterestRatePayout) and isinstance(payout.rate, FloatingRate):
            return payout
    return None
