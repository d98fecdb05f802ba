"""Canonical JSON serialization for the domain model.

Every type maps to JSON with stable camelCase field names. Decimal values are
serialized as strings (never floats), dates and datetimes as ISO-8601 strings,
and enums as their SCREAMING_SNAKE_CASE value. ``canonical_dumps`` renders a
JSON document in canonical form: keys sorted, no insignificant whitespace,
UTF-8 without ASCII escaping. Two equal values always produce byte-identical
documents, which is what the determinism and durability checks compare.

Parsers raise ``ValueError`` with a field path on malformed input; API handlers
translate that into a 400 response.
"""

from __future__ import annotations

import json
from datetime import date, datetime
from decimal import Decimal, InvalidOperation
from typing import Any

from .lifecycle import (
    CalculationPeriod,
    Deadline,
    DeadlineKind,
    DeadlineStatus,
    LegKind,
    Observation,
)
from .model import (
    BusinessDayConvention,
    BusinessEvent,
    BusinessEventType,
    CalculationPeriodDates,
    ContractFormationPrimitive,
    Counterparty,
    CounterpartyRole,
    DayCountConvention,
    EquityPayout,
    ExecutionPrimitive,
    FixedRate,
    FloatingRate,
    HolidayCalendar,
    InterestRatePayout,
    Party,
    Payout,
    PaymentFrequency,
    PrimitiveEvent,
    RateSpecification,
    ResetPrimitive,
    ResetRecord,
    Trade,
    TradeState,
    TradeStatus,
    TradableProduct,
    Transfer,
    TransferPrimitive,
    TransferStatus,
    Product,
)


def canonical_dumps(value: Any) -> str:
    """Render a JSON-able value in canonical form (sorted keys, no spaces)."""
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonical_dumpb(value: Any) -> bytes:
    return canonical_dumps(value).encode("utf-8")


# ---------------------------------------------------------------------------
# parse helpers

def _require(obj: Any, field: str, where: str) -> Any:
    if not isinstance(obj, dict):
        raise ValueError(f"{where}: expected an object, got {type(obj).__name__}")
    if field not in obj:
        raise ValueError(f"{where}: missing field {field!r}")
    return obj[field]


def _parse_str(obj: dict, field: str, where: str) -> str:
    value = _require(obj, field, where)
    if not isinstance(value, str):
        raise ValueError(f"{where}.{field}: expected a string")
    return value


def _parse_int(obj: dict, field: str, where: str) -> int:
    value = _require(obj, field, where)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"{where}.{field}: expected an integer")
    return value


def _parse_decimal(obj: dict, field: str, where: str) -> Decimal:
    value = _require(obj, field, where)
    if not isinstance(value, str):
        raise ValueError(f"{where}.{field}: decimals must be JSON strings, got {type(value).__name__}")
    try:
        return Decimal(value)
    except InvalidOperation:
        raise ValueError(f"{where}.{field}: {value!r} is not a decimal") from None


def _parse_date(obj: dict, field: str, where: str) -> date:
    value = _parse_str(obj, field, where)
    try:
        return date.fromisoformat(value)
    except ValueError:
        raise ValueError(f"{where}.{field}: {value!r} is not an ISO date") from None


def parse_datetime(value: str, where: str = "datetime") -> datetime:
    try:
        return datetime.fromisoformat(value)
    except (TypeError, ValueError):
        raise ValueError(f"{where}: {value!r} is not an ISO datetime") from None


def _parse_datetime(obj: dict, field: str, where: str) -> datetime:
    return parse_datetime(_parse_str(obj, field, where), f"{where}.{field}")


def _parse_enum(obj: dict, field: str, enum_cls: type, where: str) -> Any:
    value = _parse_str(obj, field, where)
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(member.value for member in enum_cls)
        raise ValueError(f"{where}.{field}: {value!r} is not one of {allowed}") from None


# ---------------------------------------------------------------------------
# parties

def party_to_json(party: Party) -> dict:
    return {
        "partyId": party.party_id,
        "name": party.name,
        "legalEntityId": party.legal_entity_id,
    }


def party_from_json(obj: Any, where: str = "party") -> Party:
    return Party(
        party_id=_parse_str(obj, "partyId", where),
        name=_parse_str(obj, "name", where),
        legal_entity_id=_parse_str(obj, "legalEntityId", where),
    )


def counterparty_to_json(cp: Counterparty) -> dict:
    return {"partyRef": cp.party_ref, "role": cp.role.value}


def counterparty_from_json(obj: Any, where: str = "counterparty") -> Counterparty:
    return Counterparty(
        party_ref=_parse_str(obj, "partyRef", where),
        role=_parse_enum(obj, "role", CounterpartyRole, where),
    )


# ---------------------------------------------------------------------------
# product

def rate_to_json(rate: RateSpecification) -> dict:
    if isinstance(rate, FixedRate):
        return {"rateType": "FIXED", "rate": str(rate.rate)}
    return {
        "rateType": "FLOATING",
        "index": rate.index,
        "tenorMonths": rate.tenor_months,
        "spread": str(rate.spread),
    }


def rate_from_json(obj: Any, where: str = "rate") -> RateSpecification:
    kind = _parse_str(obj, "rateType", where)
    if kind == "FIXED":
        return FixedRate(rate=_parse_decimal(obj, "rate", where))
    if kind == "FLOATING":
        return FloatingRate(
            index=_parse_str(obj, "index", where),
            tenor_months=_parse_int(obj, "tenorMonths", where),
            spread=_parse_decimal(obj, "spread", where) if "spread" in obj else Decimal("0"),
        )
    raise ValueError(f"{where}.rateType: {kind!r} is not FIXED or FLOATING")


def period_dates_to_json(dates: CalculationPeriodDates) -> dict:
    return {
        "effectiveDate": dates.effective_date.isoformat(),
        "terminationDate": dates.termination_date.isoformat(),
        "frequency": dates.frequency.value,
        "businessDayConvention": dates.business_day_convention.value,
        "calendar": dates.calendar.value,
    }


def period_dates_from_json(obj: Any, where: str = "periods") -> CalculationPeriodDates:
    return CalculationPeriodDates(
        effective_date=_parse_date(obj, "effectiveDate", where),
        termination_date=_parse_date(obj, "terminationDate", where),
        frequency=_parse_enum(obj, "frequency", PaymentFrequency, where),
        business_day_convention=(
            _parse_enum(obj, "businessDayConvention", BusinessDayConvention, where)
            if "businessDayConvention" in obj
            else BusinessDayConvention.NONE
        ),
        calendar=(
            _parse_enum(obj, "calendar", HolidayCalendar, where)
            if "calendar" in obj
            else HolidayCalendar.NO_HOLIDAYS
        ),
    )


def payout_to_json(payout: Payout) -> dict:
    if isinstance(payout, InterestRatePayout):
        return {
            "payoutType": "INTEREST_RATE",
            "payerPartyRef": payout.payer_party_ref,
            "receiverPartyRef": payout.receiver_party_ref,
            "notional": str(payout.notional),
            "currency": payout.currency,
            "rate": rate_to_json(payout.rate),
            "dayCount": payout.day_count.value,
            "periods": period_dates_to_json(payout.periods),
        }
    return {
        "payoutType": "EQUITY",
        "payerPartyRef": payout.payer_party_ref,
        "receiverPartyRef": payout.receiver_party_ref,
        "underlier": payout.underlier,
    }


def payout_from_json(obj: Any, where: str = "payout") -> Payout:
    kind = _parse_str(obj, "payoutType", where)
    if kind == "INTEREST_RATE":
        return InterestRatePayout(
            payer_party_ref=_parse_str(obj, "payerPartyRef", where),
            receiver_party_ref=_parse_str(obj, "receiverPartyRef", where),
            notional=_parse_decimal(obj, "notional", where),
            currency=_parse_str(obj, "currency", where),
            rate=rate_from_json(_require(obj, "rate", where), f"{where}.rate"),
            day_count=_parse_enum(obj, "dayCount", DayCountConvention, where),
            periods=period_dates_from_json(_require(obj, "periods", where), f"{where}.periods"),
        )
    if kind == "EQUITY":
        return EquityPayout(
            payer_party_ref=_parse_str(obj, "payerPartyRef", where),
            receiver_party_ref=_parse_str(obj, "receiverPartyRef", where),
            underlier=_parse_str(obj, "underlier", where),
        )
    raise ValueError(f"{where}.payoutType: {kind!r} is not INTEREST_RATE or EQUITY")


def product_to_json(product: Product) -> dict:
    return {"payouts": [payout_to_json(p) for p in product.payouts]}


def product_from_json(obj: Any, where: str = "product") -> Product:
    payouts = _require(obj, "payouts", where)
    if not isinstance(payouts, list) or not payouts:
        raise ValueError(f"{where}.payouts: expected a non-empty array")
    return Product(
        payouts=tuple(payout_from_json(p, f"{where}.payouts[{i}]") for i, p in enumerate(payouts))
    )


def tradable_product_to_json(tp: TradableProduct) -> dict:
    return {
        "product": product_to_json(tp.product),
        "counterparties": [counterparty_to_json(cp) for cp in tp.counterparties],
    }


def tradable_product_from_json(obj: Any, where: str = "tradableProduct") -> TradableProduct:
    cps = _require(obj, "counterparties", where)
    if not isinstance(cps, list) or len(cps) != 2:
        raise ValueError(f"{where}.counterparties: expected exactly two entries")
    return TradableProduct(
        product=product_from_json(_require(obj, "product", where), f"{where}.product"),
        counterparties=(
            counterparty_from_json(cps[0], f"{where}.counterparties[0]"),
            counterparty_from_json(cps[1], f"{where}.counterparties[1]"),
        ),
    )


def trade_to_json(trade: Trade) -> dict:
    return {
        "tradeId": trade.trade_id,
        "tradeDate": trade.trade_date.isoformat(),
        "tradableProduct": tradable_product_to_json(trade.tradable_product),
    }


def trade_from_json(obj: Any, where: str = "trade") -> Trade:
    trade_id = _parse_str(obj, "tradeId", where)
    if not trade_id:
        raise ValueError(f"{where}.tradeId: must not be empty")
    return Trade(
        trade_id=trade_id,
        trade_date=_parse_date(obj, "tradeDate", where),
        tradable_product=tradable_product_from_json(
            _require(obj, "tradableProduct", where), f"{where}.tradableProduct"
        ),
    )


# ---------------------------------------------------------------------------
# trade state

def reset_record_to_json(record: ResetRecord) -> dict:
    return {
        "resetDate": record.reset_date.isoformat(),
        "index": record.index,
        "tenorMonths": record.tenor_months,
        "observedRate": str(record.observed_rate),
    }


def reset_record_from_json(obj: Any, where: str = "reset") -> ResetRecord:
    return ResetRecord(
        reset_date=_parse_date(obj, "resetDate", where),
        index=_parse_str(obj, "index", where),
        tenor_months=_parse_int(obj, "tenorMonths", where),
        observed_rate=_parse_decimal(obj, "observedRate", where),
    )


def transfer_to_json(transfer: Transfer) -> dict:
    return {
        "transferId": transfer.transfer_id,
        "payerPartyRef": transfer.payer_party_ref,
        "receiverPartyRef": transfer.receiver_party_ref,
        "amount": str(transfer.amount),
        "currency": transfer.currency,
        "settlementDate": transfer.settlement_date.isoformat(),
        "status": transfer.status.value,
    }


def transfer_from_json(obj: Any, where: str = "transfer") -> Transfer:
    return Transfer(
        transfer_id=_parse_str(obj, "transferId", where),
        payer_party_ref=_parse_str(obj, "payerPartyRef", where),
        receiver_party_ref=_parse_str(obj, "receiverPartyRef", where),
        amount=_parse_decimal(obj, "amount", where),
        currency=_parse_str(obj, "currency", where),
        settlement_date=_parse_date(obj, "settlementDate", where),
        status=_parse_enum(obj, "status", TransferStatus, where),
    )


def trade_state_to_json(state: TradeState) -> dict:
    return {
        "trade": trade_to_json(state.trade),
        "status": state.status.value,
        "resetHistory": [reset_record_to_json(r) for r in state.reset_history],
        "transferHistory": [transfer_to_json(t) for t in state.transfer_history],
    }


def trade_state_from_json(obj: Any, where: str = "tradeState") -> TradeState:
    resets = _require(obj, "resetHistory", where)
    transfers = _require(obj, "transferHistory", where)
    if not isinstance(resets, list) or not isinstance(transfers, list):
        raise ValueError(f"{where}: resetHistory and transferHistory must be arrays")
    return TradeState(
        trade=trade_from_json(_require(obj, "trade", where), f"{where}.trade"),
        status=_parse_enum(obj, "status", TradeStatus, where),
        reset_history=tuple(
            reset_record_from_json(r, f"{where}.resetHistory[{i}]") for i, r in enumerate(resets)
        ),
        transfer_history=tuple(
            transfer_from_json(t, f"{where}.transferHistory[{i}]") for i, t in enumerate(transfers)
        ),
    )


# ---------------------------------------------------------------------------
# business events

_PRIMITIVE_TAGS = {
    ExecutionPrimitive: "EXECUTION",
    ContractFormationPrimitive: "CONTRACT_FORMATION",
    ResetPrimitive: "RESET",
    TransferPrimitive: "TRANSFER",
}
_PRIMITIVE_BY_TAG = {tag: cls for cls, tag in _PRIMITIVE_TAGS.items()}


def primitive_to_json(primitive: PrimitiveEvent) -> dict:
    return {
        "primitiveType": _PRIMITIVE_TAGS[type(primitive)],
        "before": None if primitive.before is None else trade_state_to_json(primitive.before),
        "after": trade_state_to_json(primitive.after),
    }


def primitive_from_json(obj: Any, where: str = "primitive") -> PrimitiveEvent:
    tag = _parse_str(obj, "primitiveType", where)
    cls = _PRIMITIVE_BY_TAG.get(tag)
    if cls is None:
        raise ValueError(f"{where}.primitiveType: unknown tag {tag!r}")
    before_obj = _require(obj, "before", where)
    before = None if before_obj is None else trade_state_from_json(before_obj, f"{where}.before")
    after = trade_state_from_json(_require(obj, "after", where), f"{where}.after")
    if cls is ExecutionPrimitive:
        return ExecutionPrimitive(after=after, before=before)
    if before is None:
        raise ValueError(f"{where}.before: required for {tag}")
    return cls(before=before, after=after)


def business_event_to_json(event: BusinessEvent) -> dict:
    return {
        "eventId": event.event_id,
        "eventDate": event.event_date.isoformat(),
        "intent": event.intent,
        "primitives": [primitive_to_json(p) for p in event.primitives],
        "qualifiedType": event.qualified_type.value,
    }


def business_event_from_json(obj: Any, where: str = "businessEvent") -> BusinessEvent:
    primitives = _require(obj, "primitives", where)
    if not isinstance(primitives, list) or not primitives:
        raise ValueError(f"{where}.primitives: expected a non-empty array")
    intent = obj.get("intent")
    if intent is not None and not isinstance(intent, str):
        raise ValueError(f"{where}.intent: expected a string or null")
    return BusinessEvent(
        event_id=_parse_str(obj, "eventId", where),
        event_date=_parse_datetime(obj, "eventDate", where),
        primitives=tuple(
            primitive_from_json(p, f"{where}.primitives[{i}]") for i, p in enumerate(primitives)
        ),
        qualified_type=_parse_enum(obj, "qualifiedType", BusinessEventType, where),
        intent=intent,
    )


# ---------------------------------------------------------------------------
# schedule and scheduler types

def calculation_period_to_json(period: CalculationPeriod) -> dict:
    return {
        "unadjustedStart": period.unadjusted_start.isoformat(),
        "unadjustedEnd": period.unadjusted_end.isoformat(),
        "adjustedStart": period.adjusted_start.isoformat(),
        "adjustedEnd": period.adjusted_end.isoformat(),
        "paymentDate": period.payment_date.isoformat(),
        "periodIndex": period.period_index,
    }


def observation_to_json(obs: Observation) -> dict:
    return {
        "index": obs.index,
        "tenorMonths": obs.tenor_months,
        "observationDate": obs.observation_date.isoformat(),
        "rate": str(obs.rate),
    }


def observation_from_json(obj: Any, where: str = "observation") -> Observation:
    return Observation(
        index=_parse_str(obj, "index", where),
        tenor_months=_parse_int(obj, "tenorMonths", where),
        observation_date=_parse_date(obj, "observationDate", where),
        rate=_parse_decimal(obj, "rate", where),
    )


def deadline_to_json(deadline: Deadline) -> dict:
    return {
        "deadlineId": deadline.deadline_id,
        "tradeId": deadline.trade_id,
        "dueTime": deadline.due_time.isoformat(),
        "kind": deadline.kind.value,
        "periodIndex": deadline.period_index,
        "status": deadline.status.value,
    }


def deadline_from_json(obj: Any, where: str = "deadline") -> Deadline:
    return Deadline(
        deadline_id=_parse_str(obj, "deadlineId", where),
        trade_id=_parse_str(obj, "tradeId", where),
        due_time=_parse_datetime(obj, "dueTime", where),
        kind=_parse_enum(obj, "kind", DeadlineKind, where),
        period_index=_parse_int(obj, "periodIndex", where),
        status=_parse_enum(obj, "status", DeadlineStatus, where),
    )


def leg_kind_from_json(obj: dict, field: str, where: str) -> LegKind:
    return _parse_enum(obj, field, LegKind, where)
