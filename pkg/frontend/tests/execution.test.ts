import { afterEach, describe, expect, it } from "vitest";

import { mountExecutionPage, validateForm } from "../src/pages/execution.js";
import type { ExecutionFormValues } from "../src/pages/execution.js";
import { BANK_A, DEALER_B } from "./fixtures.js";
import { bannerTexts, bench, byTestId, disposeAll, tick, track } from "./helpers.js";

afterEach(disposeAll);

function referenceValues(): ExecutionFormValues {
  return {
    tradeId: "T9",
    tradeDate: "2024-01-10",
    notional: "10000000",
    currency: "USD",
    effectiveDate: "2024-01-15",
    terminationDate: "2025-01-15",
    frequency: "QUARTERLY",
    businessDayConvention: "MODIFIED_FOLLOWING",
    calendar: "WEEKENDS_ONLY",
    fixedRate: "0.02",
    fixedDayCount: "ACT_360",
    floatingIndex: "SIM-IBOR",
    tenorMonths: "3",
    spread: "0",
    floatingDayCount: "ACT_360",
    fixedPayerRef: "party-1",
    floatingPayerRef: "party-2",
  };
}

async function mountWithParties() {
  const t = bench();
  t.server.parties = [{ ...BANK_A }, { ...DEALER_B }];
  const page = track(mountExecutionPage(t.root, t.ctx));
  await page.refresh();
  return { ...t, page };
}

describe("validateForm", () => {
  it("accepts the reference swap", () => {
    expect(validateForm(referenceValues())).toBeNull();
  });

  it("rejects a termination date on or before the effective date", () => {
    const values = { ...referenceValues(), terminationDate: "2024-01-15" };
    expect(validateForm(values)).toContain("termination date must be after");
  });

  it("rejects a non-positive notional", () => {
    expect(validateForm({ ...referenceValues(), notional: "-5" })).toContain("notional");
    expect(validateForm({ ...referenceValues(), notional: "nope" })).toContain("notional");
  });

  it("rejects identical counterparties and missing fields", () => {
    expect(validateForm({ ...referenceValues(), floatingPayerRef: "party-1" })).toContain(
      "must differ",
    );
    expect(validateForm({ ...referenceValues(), tradeId: "  " })).toContain("trade id");
  });
});

describe("execution page", () => {
  it("fills both payer dropdowns from the registry, defaulting to distinct parties", async () => {
    const { root } = await mountWithParties();
    const fixed = byTestId<HTMLSelectElement>(root, "fixed-payer");
    const floating = byTestId<HTMLSelectElement>(root, "floating-payer");
    expect(fixed.options.length).toBe(2);
    expect(fixed.value).toBe("party-1");
    expect(floating.value).toBe("party-2");
  });

  it("submits the exact wire document for the reference swap", async () => {
    const { server, root, banners } = await mountWithParties();
    byTestId<HTMLInputElement>(root, "trade-id").value = "T9";
    byTestId<HTMLButtonElement>(root, "submit-trade").click();
    await tick();

    const periods = {
      effectiveDate: "2024-01-15",
      terminationDate: "2025-01-15",
      frequency: "QUARTERLY",
      businessDayConvention: "MODIFIED_FOLLOWING",
      calendar: "WEEKENDS_ONLY",
    };
    expect(server.callsTo("POST", "/trades")[0]?.body).toEqual({
      tradeId: "T9",
      tradeDate: "2024-01-10",
      tradableProduct: {
        product: {
          payouts: [
            {
              payoutType: "INTEREST_RATE",
              payerPartyRef: "party-1",
              receiverPartyRef: "party-2",
              notional: "10000000",
              currency: "USD",
              rate: { rateType: "FIXED", rate: "0.02" },
              dayCount: "ACT_360",
              periods,
            },
            {
              payoutType: "INTEREST_RATE",
              payerPartyRef: "party-2",
              receiverPartyRef: "party-1",
              notional: "10000000",
              currency: "USD",
              rate: { rateType: "FLOATING", index: "SIM-IBOR", tenorMonths: 3, spread: "0" },
              dayCount: "ACT_360",
              periods,
            },
          ],
        },
        counterparties: [
          { partyRef: "party-1", role: "PARTY_1" },
          { partyRef: "party-2", role: "PARTY_2" },
        ],
      },
    });
    expect(bannerTexts(banners).join(" ")).toContain("Trade T9 submitted");
  });

  it("blocks submission client-side when termination precedes effective", async () => {
    const { server, root } = await mountWithParties();
    byTestId<HTMLInputElement>(root, "trade-id").value = "T9";
    byTestId<HTMLInputElement>(root, "termination-date").value = "2024-01-01";
    byTestId<HTMLButtonElement>(root, "submit-trade").click();
    await tick();
    const message = byTestId(root, "validation-message");
    expect(message.classList.contains("hidden")).toBe(false);
    expect(message.textContent).toContain("termination date must be after");
    expect(server.callsTo("POST", "/trades")).toHaveLength(0);
  });

  it("surfaces a DUPLICATE_TRADE conflict from the server", async () => {
    const { server, root, banners } = await mountWithParties();
    server.failNext("POST", "/trades", 409, "DUPLICATE_TRADE", "trade T9 already exists");
    byTestId<HTMLInputElement>(root, "trade-id").value = "T9";
    byTestId<HTMLButtonElement>(root, "submit-trade").click();
    await tick();
    expect(bannerTexts(banners).some((t) => t.includes("DUPLICATE_TRADE"))).toBe(true);
  });

  it("disables the submit button while the request is pending", async () => {
    const { server, root } = await mountWithParties();
    const release = server.defer("POST", "/trades");
    byTestId<HTMLInputElement>(root, "trade-id").value = "T9";
    const button = byTestId<HTMLButtonElement>(root, "submit-trade");
    button.click();
    await tick();
    expect(button.disabled).toBe(true);
    release();
    await tick();
    expect(button.disabled).toBe(false);
  });
});
