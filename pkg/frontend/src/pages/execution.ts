/** Execution page: capture swap terms and submit the trade to the utility. */

import { clear, el } from "../dom.js";
import type { PageContext, PageHandle } from "../page.js";
import { withPending } from "../pending.js";
import { Poller } from "../poller.js";
import type { TradeDocument } from "../types.js";

export interface ExecutionFormValues {
  tradeId: string;
  tradeDate: string;
  notional: string;
  currency: string;
  effectiveDate: string;
  terminationDate: string;
  frequency: string;
  businessDayConvention: string;
  calendar: string;
  fixedRate: string;
  fixedDayCount: string;
  floatingIndex: string;
  tenorMonths: string;
  spread: string;
  floatingDayCount: string;
  fixedPayerRef: string;
  floatingPayerRef: string;
}

/** First problem wins; null means the form may be submitted. Dates compare
 * as ISO strings; amounts are forwarded verbatim so the server stays the
 * only place that does arithmetic. */
export function validateForm(values: ExecutionFormValues): string | null {
  const required: [keyof ExecutionFormValues, string][] = [
    ["tradeId", "trade id"],
    ["tradeDate", "trade date"],
    ["notional", "notional"],
    ["currency", "currency"],
    ["effectiveDate", "effective date"],
    ["terminationDate", "termination date"],
    ["fixedRate", "fixed rate"],
    ["floatingIndex", "floating index"],
    ["tenorMonths", "floating tenor"],
    ["fixedPayerRef", "fixed-leg payer"],
    ["floatingPayerRef", "floating-leg payer"],
  ];
  for (const [key, label] of required) {
    if (values[key].trim() === "") return `${label} is required`;
  }
  if (values.terminationDate <= values.effectiveDate) {
    return "termination date must be after the effective date";
  }
  if (!(Number(values.notional) > 0)) return "notional must be a positive number";
  if (values.fixedPayerRef === values.floatingPayerRef) {
    return "the two counterparties must differ";
  }
  return null;
}

export function buildTradeDocument(values: ExecutionFormValues): TradeDocument {
  const periods = {
    effectiveDate: values.effectiveDate,
    terminationDate: values.terminationDate,
    frequency: values.frequency,
    businessDayConvention: values.businessDayConvention,
    calendar: values.calendar,
  };
  return {
    tradeId: values.tradeId.trim(),
    tradeDate: values.tradeDate,
    tradableProduct: {
      product: {
        payouts: [
          {
            payoutType: "INTEREST_RATE",
            payerPartyRef: values.fixedPayerRef,
            receiverPartyRef: values.floatingPayerRef,
            notional: values.notional.trim(),
            currency: values.currency.trim(),
            rate: { rateType: "FIXED", rate: values.fixedRate.trim() },
            dayCount: values.fixedDayCount,
            periods,
          },
          {
            payoutType: "INTEREST_RATE",
            payerPartyRef: values.floatingPayerRef,
            receiverPartyRef: values.fixedPayerRef,
            notional: values.notional.trim(),
            currency: values.currency.trim(),
            rate: {
              rateType: "FLOATING",
              index: values.floatingIndex.trim(),
              tenorMonths: Number(values.tenorMonths),
              spread: values.spread.trim() === "" ? "0" : values.spread.trim(),
            },
            dayCount: values.floatingDayCount,
            periods,
          },
        ],
      },
      counterparties: [
        { partyRef: values.fixedPayerRef, role: "PARTY_1" },
        { partyRef: values.floatingPayerRef, role: "PARTY_2" },
      ],
    },
  };
}

const FREQUENCIES = ["MONTHLY", "QUARTERLY", "SEMI_ANNUAL", "ANNUAL"];
const DAY_COUNTS = ["ACT_360", "ACT_365F", "THIRTY_360_US"];
const CONVENTIONS = ["NONE", "FOLLOWING", "MODIFIED_FOLLOWING"];
const CALENDARS = ["NO_HOLIDAYS", "WEEKENDS_ONLY"];

function select(testId: string, options: string[], selected: string): HTMLSelectElement {
  const node = el("select", { "data-testid": testId });
  for (const option of options) {
    const item = el("option", { value: option }, option);
    if (option === selected) item.setAttribute("selected", "");
    node.append(item);
  }
  node.value = selected;
  return node;
}

export function mountExecutionPage(root: HTMLElement, ctx: PageContext): PageHandle {
  const tradeId = el("input", { type: "text", "data-testid": "trade-id" });
  const tradeDate = el("input", { type: "date", value: "2024-01-10", "data-testid": "trade-date" });
  const notional = el("input", { type: "text", value: "10000000", "data-testid": "notional" });
  const currency = el("input", { type: "text", value: "USD", "data-testid": "currency" });
  const effective = el("input", { type: "date", value: "2024-01-15", "data-testid": "effective-date" });
  const termination = el("input", { type: "date", value: "2025-01-15", "data-testid": "termination-date" });
  const frequency = select("frequency", FREQUENCIES, "QUARTERLY");
  const convention = select("convention", CONVENTIONS, "MODIFIED_FOLLOWING");
  const calendar = select("calendar", CALENDARS, "WEEKENDS_ONLY");
  const fixedRate = el("input", { type: "text", value: "0.02", "data-testid": "fixed-rate" });
  const fixedDayCount = select("fixed-day-count", DAY_COUNTS, "ACT_360");
  const floatingIndex = el("input", { type: "text", value: "SIM-IBOR", "data-testid": "floating-index" });
  const tenorMonths = el("input", { type: "number", value: "3", "data-testid": "tenor-months" });
  const spread = el("input", { type: "text", value: "0", "data-testid": "spread" });
  const floatingDayCount = select("floating-day-count", DAY_COUNTS, "ACT_360");
  const fixedPayer = el("select", { "data-testid": "fixed-payer" });
  const floatingPayer = el("select", { "data-testid": "floating-payer" });
  const validation = el("p", { class: "validation hidden", "data-testid": "validation-message" });
  const submitButton = el("button", { type: "button", "data-testid": "submit-trade" }, "Submit trade");

  function formValues(): ExecutionFormValues {
    return {
      tradeId: tradeId.value,
      tradeDate: tradeDate.value,
      notional: notional.value,
      currency: currency.value,
      effectiveDate: effective.value,
      terminationDate: termination.value,
      frequency: frequency.value,
      businessDayConvention: convention.value,
      calendar: calendar.value,
      fixedRate: fixedRate.value,
      fixedDayCount: fixedDayCount.value,
      floatingIndex: floatingIndex.value,
      tenorMonths: tenorMonths.value,
      spread: spread.value,
      floatingDayCount: floatingDayCount.value,
      fixedPayerRef: fixedPayer.value,
      floatingPayerRef: floatingPayer.value,
    };
  }

  submitButton.addEventListener("click", () => {
    const values = formValues();
    const problem = validateForm(values);
    if (problem !== null) {
      validation.textContent = problem;
      validation.classList.remove("hidden");
      return;
    }
    validation.classList.add("hidden");
    void withPending(submitButton, ctx.notify, async () => {
      const row = await ctx.api.submitTrade(buildTradeDocument(values));
      ctx.notify.toast(`Trade ${row.tradeId} submitted (${row.productType})`);
      tradeId.value = "";
    });
  });

  function row(label: string, ...controls: HTMLElement[]): HTMLElement {
    return el("div", { class: "form-row" }, el("label", {}, label), ...controls);
  }

  root.append(
    el("h2", {}, "Execution"),
    el(
      "section",
      { class: "card" },
      el("h3", {}, "New swap"),
      row("Trade id", tradeId),
      row("Trade date", tradeDate),
      row("Notional", notional, currency),
      row("Effective / termination", effective, termination),
      row("Frequency", frequency),
      row("Adjustment", convention, calendar),
      row("Fixed leg", fixedRate, fixedDayCount),
      row("Floating leg", floatingIndex, tenorMonths, spread, floatingDayCount),
      row("Fixed-leg payer", fixedPayer),
      row("Floating-leg payer", floatingPayer),
      validation,
      el("div", { class: "form-row" }, submitButton),
    ),
  );

  async function refresh(): Promise<void> {
    const parties = await ctx.api.parties();
    for (const dropdown of [fixedPayer, floatingPayer]) {
      const previous = dropdown.value;
      clear(dropdown);
      for (const party of parties) {
        dropdown.append(el("option", { value: party.partyId }, `${party.partyId} · ${party.name}`));
      }
      if (parties.some((p) => p.partyId === previous)) dropdown.value = previous;
    }
    if (parties.length >= 2 && fixedPayer.value === floatingPayer.value) {
      floatingPayer.value = parties.find((p) => p.partyId !== fixedPayer.value)?.partyId ?? "";
    }
  }

  const poller = new Poller(refresh);
  poller.start();
  return { refresh, dispose: () => poller.stop() };
}
