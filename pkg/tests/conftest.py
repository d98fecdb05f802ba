"""Shared builders for the test suite.

Most tests exercise one reference swap: 10,000,000 USD notional, one year
quarterly, fixed 2% against SIM-IBOR 3M flat, ACT/360 both legs, modified
following over a weekends-only calendar, effective 2024-01-15. Builders below
construct it (or variations) both as domain objects and as wire JSON.
"""

from __future__ import annotations

import collections
from datetime import date, datetime
from decimal import Decimal

import pytest

from swapsim import SimulatorApp
from swapsim.model import (
    BusinessDayConvention,
    Counterparty,
    CounterpartyRole,
    DayCountConvention,
    CalculationPeriodDates,
    FixedRate,
    FloatingRate,
    HolidayCalendar,
    InterestRatePayout,
    PaymentFrequency,
    Product,
    TradableProduct,
    Trade,
)

PARTY_A = "party-1"
PARTY_B = "party-2"


def make_period_dates(
    effective: date = date(2024, 1, 15),
    termination: date = date(2025, 1, 15),
    frequency: PaymentFrequency = PaymentFrequency.QUARTERLY,
    convention: BusinessDayConvention = BusinessDayConvention.MODIFIED_FOLLOWING,
    calendar: HolidayCalendar = HolidayCalendar.WEEKENDS_ONLY,
) -> CalculationPeriodDates:
    return CalculationPeriodDates(
        effective_date=effective,
        termination_date=termination,
        frequency=frequency,
        business_day_convention=convention,
        calendar=calendar,
    )


def make_irs_trade(
    trade_id: str = "T1",
    trade_date: date = date(2024, 1, 10),
    notional: Decimal = Decimal("10000000"),
    currency: str = "USD",
    fixed_rate: Decimal = Decimal("0.02"),
    index: str = "SIM-IBOR",
    tenor_months: int = 3,
    spread: Decimal = Decimal("0"),
    day_count: DayCountConvention = DayCountConvention.ACT_360,
    periods: CalculationPeriodDates | None = None,
    fixed_payer: str = PARTY_A,
    floating_payer: str = PARTY_B,
) -> Trade:
    periods = periods or make_period_dates()
    fixed = InterestRatePayout(
        payer_party_ref=fixed_payer,
        receiver_party_ref=floating_payer,
        notional=notional,
        currency=currency,
        rate=FixedRate(rate=fixed_rate),
        day_count=day_count,
        periods=periods,
    )
    floating = InterestRatePayout(
        payer_party_ref=floating_payer,
        receiver_party_ref=fixed_payer,
        notional=notional,
        currency=currency,
        rate=FloatingRate(index=index, tenor_months=tenor_months, spread=spread),
        day_count=day_count,
        periods=periods,
    )
    return Trade(
        trade_id=trade_id,
        trade_date=trade_date,
        tradable_product=TradableProduct(
            product=Product(payouts=(fixed, floating)),
            counterparties=(
                Counterparty(party_ref=fixed_payer, role=CounterpartyRole.PARTY_1),
                Counterparty(party_ref=floating_payer, role=CounterpartyRole.PARTY_2),
            ),
        ),
    )


def trade_wire_json(
    trade_id: str = "T1",
    party_a: str = PARTY_A,
    party_b: str = PARTY_B,
    notional: str = "10000000",
    fixed_rate: str = "0.02",
) -> dict:
    periods = {
        "effectiveDate": "2024-01-15",
        "terminationDate": "2025-01-15",
        "frequency": "QUARTERLY",
        "businessDayConvention": "MODIFIED_FOLLOWING",
        "calendar": "WEEKENDS_ONLY",
    }
    return {
        "tradeId": trade_id,
        "tradeDate": "2024-01-10",
        "tradableProduct": {
            "product": {
                "payouts": [
                    {
                        "payoutType": "INTEREST_RATE",
                        "payerPartyRef": party_a,
                        "receiverPartyRef": party_b,
                        "notional": notional,
                        "currency": "USD",
                        "rate": {"rateType": "FIXED", "rate": fixed_rate},
                        "dayCount": "ACT_360",
                        "periods": periods,
                    },
                    {
                        "payoutType": "INTEREST_RATE",
                        "payerPartyRef": party_b,
                        "receiverPartyRef": party_a,
                        "notional": notional,
                        "currency": "USD",
                        "rate": {
                            "rateType": "FLOATING",
                            "index": "SIM-IBOR",
                            "tenorMonths": 3,
                            "spread": "0",
                        },
                        "dayCount": "ACT_360",
                        "periods": periods,
                    },
                ]
            },
            "counterparties": [
                {"partyRef": party_a, "role": "PARTY_1"},
                {"partyRef": party_b, "role": "PARTY_2"},
            ],
        },
    }


def register_reference_parties(app: SimulatorApp) -> tuple[str, str]:
    a = app.registry.register("Bank A", "LEI-A")
    b = app.registry.register("Dealer B", "LEI-B")
    return a.party_id, b.party_id


def run_reference_scenario(app: SimulatorApp) -> None:
    """Execute the reference swap start to finish on a fresh app."""
    from swapsim.fmi import ConsentDecision

    register_reference_parties(app)
    app.harness.create_clock(datetime(2024, 1, 10))
    app.fmi.submit_execution(make_irs_trade())
    app.fmi.consent("T1", ConsentDecision.CONFIRM)
    app.harness.play()


def envelope_census(store) -> dict[str, int]:
    counts: collections.Counter[str] = collections.Counter()
    for envelope in store.read_all():
        counts[envelope.event_type] += 1
    return dict(counts)


@pytest.fixture
def app():
    sim = SimulatorApp()
    yield sim
    sim.close()


@pytest.fixture
def matured_app(app):
    run_reference_scenario(app)
    return app
