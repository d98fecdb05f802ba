"""Command side of the post-trade services: trade submission, consent,
resets, payments, and aggregate replay."""

from __future__ import annotations

from datetime import date, datetime
from decimal import Decimal

import pytest

from swapsim.errors import (
    AlreadyPaid,
    AlreadyReset,
    DuplicateTrade,
    InvalidCommand,
    InvalidTrade,
    InvalidTransition,
    NotFound,
    ResetMissing,
    UnknownParty,
)
from swapsim.eventstore import CommandEnvelope
from swapsim.fmi import ConsentDecision, evolve_irs, trade_stream_id
from swapsim.fmi.command import transfer_id_for
from swapsim.lifecycle import LegKind, resolve_observation
from swapsim.model import TradeStatus, TransferStatus

from conftest import (
    envelope_census,
    make_irs_trade,
    register_reference_parties,
    run_reference_scenario,
)


@pytest.fixture
def ready(app):
    """App with the reference parties registered and a running clock."""
    register_reference_parties(app)
    app.harness.create_clock(datetime(2024, 1, 10))
    return app


@pytest.fixture
def confirmed(ready):
    ready.fmi.submit_execution(make_irs_trade())
    ready.fmi.consent("T1", ConsentDecision.CONFIRM)
    return ready


class TestSubmitExecution:
    def test_creates_executed_aggregate(self, ready):
        envelopes = ready.fmi.submit_execution(make_irs_trade())
        assert [e.event_type for e in envelopes] == ["ExecutionOccurred"]
        aggregate = ready.fmi.irs_aggregate("T1")
        assert aggregate.status is TradeStatus.EXECUTED
        assert aggregate.version == 1
        assert aggregate.open_actions == ("ConfirmExecution",)

    def test_duplicate_trade_id_rejected(self, ready):
        ready.fmi.submit_execution(make_irs_trade())
        with pytest.raises(DuplicateTrade):
            ready.fmi.submit_execution(make_irs_trade())

    def test_unknown_party_rejected(self, ready):
        trade = make_irs_trade(fixed_payer="party-99")
        with pytest.raises(UnknownParty):
            ready.fmi.submit_execution(trade)

    def test_invalid_trade_rejected_with_no_events(self, ready):
        before = ready.store.last_sequence()
        with pytest.raises(InvalidTrade):
            ready.fmi.submit_execution(make_irs_trade(notional=Decimal("-1")))
        assert ready.store.last_sequence() == before


class TestConsent:
    def test_confirm_schedules_every_deadline(self, ready):
        ready.fmi.submit_execution(make_irs_trade())
        envelopes = ready.fmi.consent("T1", ConsentDecision.CONFIRM)
        types = [e.event_type for e in envelopes]
        assert types[0] == "TradeConfirmed"
        assert types.count("DeadlineScheduled") == 12
        aggregate = ready.fmi.irs_aggregate("T1")
        assert aggregate.status is TradeStatus.CONFIRMED
        assert aggregate.open_actions == ()

    def test_reject_schedules_nothing(self, ready):
        ready.fmi.submit_execution(make_irs_trade())
        envelopes = ready.fmi.consent("T1", ConsentDecision.REJECT)
        assert [e.event_type for e in envelopes] == ["TradeRejected"]
        assert ready.fmi.irs_aggregate("T1").status is TradeStatus.REJECTED
        assert ready.harness.open_deadlines() == []

    def test_second_consent_is_invalid_transition(self, ready):
        ready.fmi.submit_execution(make_irs_trade())
        ready.fmi.consent("T1", ConsentDecision.CONFIRM)
        with pytest.raises(InvalidTransition):
            ready.fmi.consent("T1", ConsentDecision.CONFIRM)
        with pytest.raises(InvalidTransition):
            ready.fmi.consent("T1", ConsentDecision.REJECT)

    def test_consent_on_unknown_trade(self, ready):
        with pytest.raises(NotFound):
            ready.fmi.consent("T9", ConsentDecision.CONFIRM)

    def test_malformed_decision_rejected(self, ready):
        ready.fmi.submit_execution(make_irs_trade())
        command = CommandEnvelope(
            command_id="cmd-x",
            command_type="Consent",
            target_aggregate_id=trade_stream_id("T1"),
            payload={"tradeId": "T1", "decision": "MAYBE"},
        )
        with pytest.raises(InvalidCommand):
            ready.bus.dispatch(command)


class TestTriggerReset:
    def test_records_seeded_fixing(self, confirmed):
        envelopes = confirmed.fmi.trigger_reset("T1", 0)
        assert [e.event_type for e in envelopes] == ["RateReset"]
        aggregate = confirmed.fmi.irs_aggregate("T1")
        assert aggregate.reset_periods == frozenset({0})
        record = aggregate.state.reset_history[0]
        expected = resolve_observation("SIM-IBOR", 3, date(2024, 1, 15), seed=42)
        assert record.observed_rate == expected.rate
        assert record.reset_date == date(2024, 1, 15)

    def test_repeat_reset_rejected(self, confirmed):
        confirmed.fmi.trigger_reset("T1", 0)
        with pytest.raises(AlreadyReset):
            confirmed.fmi.trigger_reset("T1", 0)

    def test_reset_requires_confirmed_trade(self, ready):
        ready.fmi.submit_execution(make_irs_trade())
        with pytest.raises(InvalidTransition):
            ready.fmi.trigger_reset("T1", 0)

    def test_period_bounds_checked(self, confirmed):
        with pytest.raises(InvalidCommand):
            confirmed.fmi.trigger_reset("T1", 99)


class TestTriggerPayment:
    def test_fixed_payment_settles_through_the_chain(self, confirmed):
        confirmed.fmi.trigger_payment("T1", LegKind.FIXED, 0)
        census = envelope_census(confirmed.store)
        assert census.get("PaymentInstructed") == 1
        assert census.get("PaymentSettled") == 1
        assert census.get("CashTransferred") == 1
        aggregate = confirmed.fmi.irs_aggregate("T1")
        assert ("FIXED", 0) in aggregate.paid_legs
        transfer = aggregate.state.transfer_history[0]
        assert transfer.amount == Decimal("50555.56")
        assert transfer.status is TransferStatus.SETTLED
        assert transfer.settlement_date == date(2024, 4, 15)
        payment = confirmed.fmi.payment_aggregate(transfer_id_for("T1", LegKind.FIXED, 0))
        assert payment.transfer.transfer_id == transfer.transfer_id

    def test_floating_payment_requires_reset_first(self, confirmed):
        with pytest.raises(ResetMissing):
            confirmed.fmi.trigger_payment("T1", LegKind.FLOATING, 0)

    def test_floating_payment_uses_the_fixing(self, confirmed):
        confirmed.fmi.trigger_reset("T1", 0)
        confirmed.fmi.trigger_payment("T1", LegKind.FLOATING, 0)
        transfer = confirmed.fmi.irs_aggregate("T1").state.transfer_history[0]
        assert transfer.amount == Decimal("155685.83")
        # floating leg pays from party-2 to party-1
        assert transfer.payer_party_ref == "party-2"
        assert transfer.receiver_party_ref == "party-1"

    def test_repeat_payment_rejected(self, confirmed):
        confirmed.fmi.trigger_payment("T1", LegKind.FIXED, 0)
        with pytest.raises(AlreadyPaid):
            confirmed.fmi.trigger_payment("T1", LegKind.FIXED, 0)

    def test_payment_requires_confirmed_trade(self, ready):
        ready.fmi.submit_execution(make_irs_trade())
        with pytest.raises(InvalidTransition):
            ready.fmi.trigger_payment("T1", LegKind.FIXED, 0)

    def test_final_payment_matures_the_trade(self, confirmed):
        for period in range(4):
            confirmed.fmi.trigger_reset("T1", period)
            confirmed.fmi.trigger_payment("T1", LegKind.FIXED, period)
            confirmed.fmi.trigger_payment("T1", LegKind.FLOATING, period)
        aggregate = confirmed.fmi.irs_aggregate("T1")
        assert aggregate.status is TradeStatus.MATURED
        assert len(aggregate.state.transfer_history) == 8
        assert envelope_census(confirmed.store).get("TradeMatured") == 1

    def test_period_bounds_checked(self, confirmed):
        with pytest.raises(InvalidCommand):
            confirmed.fmi.trigger_payment("T1", LegKind.FIXED, 4)


class TestAggregates:
    def test_replay_matches_live(self, matured_app):
        live = matured_app.fmi.irs_aggregate("T1")
        replayed = matured_app.fmi.replay_irs("T1")
        assert replayed == live

    def test_store_fold_matches_service_view(self, matured_app):
        folded = matured_app.store.replay_aggregate(trade_stream_id("T1"), evolve_irs)
        assert folded == matured_app.fmi.irs_aggregate("T1")

    def test_unknown_trade_not_found(self, app):
        with pytest.raises(NotFound):
            app.fmi.irs_aggregate("nope")
        with pytest.raises(NotFound):
            app.fmi.payment_aggregate("nope")

    def test_trade_ids_listed_in_submission_order(self, ready):
        ready.fmi.submit_execution(make_irs_trade())
        ready.fmi.submit_execution(make_irs_trade(trade_id="T2"))
        assert ready.fmi.trade_ids() == ["T1", "T2"]

    def test_party_in_use_tracks_live_trades(self, ready):
        assert not ready.fmi.party_in_use("party-1")
        ready.fmi.submit_execution(make_irs_trade())
        assert ready.fmi.party_in_use("party-1")
        assert ready.fmi.party_in_use("party-2")
        assert not ready.fmi.party_in_use("party-3")
        ready.fmi.consent("T1", ConsentDecision.REJECT)
        assert not ready.fmi.party_in_use("party-1")

    def test_matured_trade_releases_parties(self, matured_app):
        assert not matured_app.fmi.party_in_use("party-1")

    def test_evolve_rejects_foreign_event(self, matured_app):
        clock_envelope = next(
            e for e in matured_app.store.read_all() if e.event_type == "ClockCreated"
        )
        with pytest.raises(ValueError):
            evolve_irs(None, clock_envelope)


class TestScenario:
    def test_reference_run_event_census(self, app):
        run_reference_scenario(app)
        census = envelope_census(app.store)
        assert census == {
            "ClockCreated": 1,
            "ClockAdvanced": 5,
            "ExecutionOccurred": 1,
            "TradeConfirmed": 1,
            "DeadlineScheduled": 12,
            "DeadlineBreached": 12,
            "RateReset": 4,
            "PaymentInstructed": 8,
            "PaymentSettled": 8,
            "CashTransferred": 8,
            "TradeMatured": 1,
        }
        assert app.store.last_sequence() == 61
