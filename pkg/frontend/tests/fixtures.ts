/** Canned API payloads for tests, shaped exactly like the server's JSON.
 * Amounts mirror a real seed-42 run of the reference scenario. */

import type { BlotterRow, DeadlineView, EventStreamRow, Party } from "../src/types.js";

export const BANK_A: Party = { partyId: "party-1", name: "Bank A", legalEntityId: "LEI-A" };
export const DEALER_B: Party = { partyId: "party-2", name: "Dealer B", legalEntityId: "LEI-B" };

export function executedRow(): BlotterRow {
  return {
    tradeId: "T1",
    counterpartyNames: ["Bank A", "Dealer B"],
    productType: "INTEREST_RATE_SWAP_FIXED_FLOAT",
    status: "EXECUTED",
    tradeDate: "2024-01-10",
    effectiveDate: "2024-01-15",
    terminationDate: "2025-01-15",
    notional: "10000000",
    currency: "USD",
    fixedRate: "0.02",
    floatingIndex: "SIM-IBOR",
    floatingTenorMonths: 3,
    floatingSpread: "0",
    openActions: ["ConfirmExecution"],
    cashflows: [],
    projectedCashflows: [
      { date: "2024-04-15", legKind: "FIXED", periodIndex: 0, currency: "USD", amount: "50555.56", rate: "0.02" },
      { date: "2024-04-15", legKind: "FLOATING", periodIndex: 0, currency: "USD", amount: null, rate: null },
      { date: "2024-07-15", legKind: "FIXED", periodIndex: 1, currency: "USD", amount: "50555.56", rate: "0.02" },
      { date: "2024-07-15", legKind: "FLOATING", periodIndex: 1, currency: "USD", amount: null, rate: null },
    ],
    updatedAt: "2024-01-10T00:00:00",
  };
}

export function confirmedRow(): BlotterRow {
  return {
    ...executedRow(),
    status: "CONFIRMED",
    openActions: [],
    cashflows: [
      {
        date: "2024-04-15",
        legKind: "FIXED",
        periodIndex: 0,
        currency: "USD",
        amount: "50555.56",
        direction: "PARTY1_TO_PARTY2",
        settled: true,
      },
      {
        date: "2024-04-15",
        legKind: "FLOATING",
        periodIndex: 0,
        currency: "USD",
        amount: "155685.83",
        direction: "PARTY2_TO_PARTY1",
        settled: true,
      },
    ],
    projectedCashflows: [
      { date: "2024-04-15", legKind: "FIXED", periodIndex: 0, currency: "USD", amount: "50555.56", rate: "0.02" },
      { date: "2024-04-15", legKind: "FLOATING", periodIndex: 0, currency: "USD", amount: "155685.83", rate: "0.06159" },
      { date: "2024-07-15", legKind: "FIXED", periodIndex: 1, currency: "USD", amount: "50555.56", rate: "0.02" },
      { date: "2024-07-15", legKind: "FLOATING", periodIndex: 1, currency: "USD", amount: null, rate: null },
    ],
    updatedAt: "2024-04-15T00:00:00",
  };
}

export const NEXT_DEADLINE: DeadlineView = {
  deadlineId: "T1.deadline.reset.0",
  tradeId: "T1",
  dueTime: "2024-01-15T00:00:00",
  kind: "RESET",
  periodIndex: 0,
  name: "Reset period 0 (floating)",
};

/** Newest-first, mixing CDM and infrastructure events. */
export function eventRows(): EventStreamRow[] {
  return [
    {
      globalSequence: 15,
      simulatorEventName: "TradeConfirmed",
      aggregateId: "trade.T1",
      simulationTime: "2024-01-10T00:00:00",
      cdmEventType: "CONTRACT_FORMATION",
      description: "Trade T1 confirmed",
    },
    {
      globalSequence: 14,
      simulatorEventName: "ClockAdvanced",
      aggregateId: "simulation-clock",
      simulationTime: "2024-01-10T00:00:00",
      cdmEventType: null,
      description: "Clock advanced to 2024-01-10T00:00:00",
    },
    {
      globalSequence: 13,
      simulatorEventName: "ExecutionOccurred",
      aggregateId: "trade.T1",
      simulationTime: "2024-01-10T00:00:00",
      cdmEventType: "EXECUTION",
      description: "Trade T1 executed",
    },
    {
      globalSequence: 12,
      simulatorEventName: "ClockCreated",
      aggregateId: "simulation-clock",
      simulationTime: "2024-01-10T00:00:00",
      cdmEventType: null,
      description: "Clock created at 2024-01-10T00:00:00",
    },
  ];
}

/** A long newest-first stream for window-size tests. */
export function manyEventRows(count: number): EventStreamRow[] {
  const rows: EventStreamRow[] = [];
  for (let seq = count; seq >= 1; seq--) {
    rows.push({
      globalSequence: seq,
      simulatorEventName: seq % 2 === 0 ? "ClockAdvanced" : "RateReset",
      aggregateId: seq % 2 === 0 ? "simulation-clock" : "trade.T1",
      simulationTime: "2024-01-15T00:00:00",
      cdmEventType: seq % 2 === 0 ? null : "RESET",
      description: `event ${seq}`,
    });
  }
  return rows;
}
