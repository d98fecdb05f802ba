/** View models mirroring the API's JSON. Amounts and rates stay strings:
 * every number shown on screen comes from the server as-is. */

export interface Party {
  partyId: string;
  name: string;
  legalEntityId: string;
}

export interface ClockState {
  clockId: string;
  currentTime: string;
}

export interface DeadlineView {
  deadlineId: string;
  tradeId: string;
  dueTime: string;
  kind: string;
  periodIndex: number;
  name: string;
}

export interface NextDeadlineResponse {
  deadline: DeadlineView | null;
}

export interface TriggerReport {
  currentTime: string;
  breachedDeadlines: unknown[];
}

export type LegKind = "FIXED" | "FLOATING";

export interface CashflowRow {
  date: string;
  legKind: LegKind;
  periodIndex: number;
  currency: string;
  amount: string;
  direction: string;
  settled: boolean;
}

export interface ProjectedCashflowRow {
  date: string;
  legKind: LegKind;
  periodIndex: number;
  currency: string;
  amount: string | null;
  rate: string | null;
}

export interface BlotterRow {
  tradeId: string;
  counterpartyNames: string[];
  productType: string;
  status: string;
  tradeDate: string;
  effectiveDate: string;
  terminationDate: string;
  notional: string;
  currency: string;
  fixedRate: string;
  floatingIndex: string;
  floatingTenorMonths: number;
  floatingSpread: string;
  openActions: string[];
  cashflows: CashflowRow[];
  projectedCashflows: ProjectedCashflowRow[];
  updatedAt: string;
}

export interface EventStreamRow {
  globalSequence: number;
  simulatorEventName: string;
  aggregateId: string;
  simulationTime: string;
  cdmEventType: string | null;
  description: string;
}

/** Wire document for POST /trades, assembled from the execution form. */
export interface TradeDocument {
  tradeId: string;
  tradeDate: string;
  tradableProduct: {
    product: { payouts: PayoutDocument[] };
    counterparties: { partyRef: string; role: "PARTY_1" | "PARTY_2" }[];
  };
}

export interface PayoutDocument {
  payoutType: "INTEREST_RATE";
  payerPartyRef: string;
  receiverPartyRef: string;
  notional: string;
  currency: string;
  rate:
    | { rateType: "FIXED"; rate: string }
    | { rateType: "FLOATING"; index: string; tenorMonths: number; spread: string };
  dayCount: string;
  periods: {
    effectiveDate: string;
    terminationDate: string;
    frequency: string;
    businessDayConvention: string;
    calendar: string;
  };
}

/** The blotter action name the API uses for a pending consent. */
export const CONFIRM_EXECUTION = "ConfirmExecution";
