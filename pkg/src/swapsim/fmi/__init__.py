"""Post-trade market-infrastructure services: the command side that owns the
swap and payment aggregates, and the query side that materializes read views
from the event log."""

from .command import (
    ConsentDecision,
    FmiCommandService,
    IrsAggregate,
    PaymentAggregate,
    evolve_irs,
    evolve_payment,
    payment_stream_id,
    trade_stream_id,
)
from .query import (
    CONFIRM_EXECUTION_ACTION,
    BlotterRow,
    CashflowRow,
    EventStreamRow,
    NextDeadlineView,
    ProjectedCashflowRow,
    QueryService,
)

__all__ = [
    "ConsentDecision",
    "FmiCommandService",
    "IrsAggregate",
    "PaymentAggregate",
    "evolve_irs",
    "evolve_payment",
    "payment_stream_id",
    "trade_stream_id",
    "CONFIRM_EXECUTION_ACTION",
    "BlotterRow",
    "CashflowRow",
    "EventStreamRow",
    "NextDeadlineView",
    "ProjectedCashflowRow",
    "QueryService",
]
