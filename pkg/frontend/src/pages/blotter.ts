/** Blotter page: the clock, next-deadline, and event-stream header widgets
 * above the trade table with expandable cashflow detail and consent actions. */

import { ApiError } from "../api.js";
import { clear, dash, el, fmtTime } from "../dom.js";
import type { PageContext, PageHandle } from "../page.js";
import { withPending } from "../pending.js";
import { Poller } from "../poller.js";
import type { BlotterRow, EventStreamRow, TriggerReport } from "../types.js";
import { CONFIRM_EXECUTION } from "../types.js";

export function mountBlotterPage(root: HTMLElement, ctx: PageContext): PageHandle {
  let cdmOnly = false;
  let clockExists = false;
  const expanded = new Set<string>();
  const pendingConsent = new Set<string>();

  // -- clock widget ------------------------------------------------------------

  const clockTime = el("p", { class: "widget-value", "data-testid": "clock-widget-time" }, "…");
  const forwardButton = el("button", { type: "button", disabled: "", "data-testid": "forward-button" }, "Forward");
  const playButton = el("button", { type: "button", disabled: "", "data-testid": "play-button" }, "Play");

  function reportToast(report: TriggerReport): void {
    const n = report.breachedDeadlines.length;
    ctx.notify.toast(`Clock at ${fmtTime(report.currentTime)}, ${n} deadline${n === 1 ? "" : "s"} fired`);
  }

  forwardButton.addEventListener("click", () => {
    void withPending(forwardButton, ctx.notify, async () => {
      reportToast(await ctx.api.forward());
      poller.poke();
    });
  });
  playButton.addEventListener("click", () => {
    void withPending(playButton, ctx.notify, async () => {
      reportToast(await ctx.api.play());
      poller.poke();
    });
  });

  // -- next-deadline widget ------------------------------------------------------

  const deadlineName = el("p", { class: "widget-value", "data-testid": "deadline-name" }, "…");
  const deadlineTime = el("p", { class: "widget-sub", "data-testid": "deadline-time" }, "");

  // -- event-stream widget -------------------------------------------------------

  const cdmToggle = el("input", { type: "checkbox", "data-testid": "cdm-only-toggle" });
  cdmToggle.addEventListener("change", () => {
    cdmOnly = cdmToggle.checked;
    poller.poke();
  });
  const eventsBody = el("tbody", { "data-testid": "event-rows" });

  function renderEvents(rows: EventStreamRow[]): void {
    clear(eventsBody);
    for (const row of rows) {
      eventsBody.append(
        el(
          "tr",
          { title: row.description },
          el("td", {}, String(row.globalSequence)),
          el("td", {}, row.simulatorEventName),
          el("td", {}, dash(row.cdmEventType)),
        ),
      );
    }
  }

  // -- blotter table ---------------------------------------------------------------

  const tradesBody = el("tbody", { "data-testid": "blotter-rows" });

  function consentButtons(row: BlotterRow): HTMLElement {
    const cell = el("span", {});
    if (!row.openActions.includes(CONFIRM_EXECUTION)) return cell;
    for (const decision of ["CONFIRM", "REJECT"] as const) {
      const label = decision === "CONFIRM" ? "Confirm" : "Reject";
      const button = el("button", { type: "button", class: "consent" }, label);
      if (pendingConsent.has(row.tradeId)) button.disabled = true;
      button.addEventListener("click", () => {
        pendingConsent.add(row.tradeId);
        void withPending(button, ctx.notify, async () => {
          await ctx.api.consent(row.tradeId, decision);
          ctx.notify.toast(`${label}ed ${row.tradeId}`);
        }).finally(() => {
          pendingConsent.delete(row.tradeId);
          poller.poke();
        });
      });
      cell.append(button, " ");
    }
    return cell;
  }

  function detailRow(row: BlotterRow): HTMLElement {
    const realizedBody = el("tbody");
    for (const flow of row.cashflows) {
      realizedBody.append(
        el(
          "tr",
          {},
          el("td", {}, flow.date),
          el("td", {}, flow.legKind),
          el("td", {}, String(flow.periodIndex)),
          el("td", { class: "num" }, `${flow.amount} ${flow.currency}`),
          el("td", {}, flow.direction),
          el("td", {}, flow.settled ? "settled" : "pending"),
        ),
      );
    }
    const projectedBody = el("tbody");
    for (const flow of row.projectedCashflows) {
      projectedBody.append(
        el(
          "tr",
          {},
          el("td", {}, flow.date),
          el("td", {}, flow.legKind),
          el("td", {}, String(flow.periodIndex)),
          el("td", { class: "num" }, flow.amount === null ? "—" : `${flow.amount} ${flow.currency}`),
          el("td", { class: "num" }, dash(flow.rate)),
        ),
      );
    }
    const headers = (...labels: string[]) =>
      el("thead", {}, el("tr", {}, ...labels.map((label) => el("th", {}, label))));
    return el(
      "tr",
      { class: "detail-row", "data-testid": `detail-${row.tradeId}` },
      el(
        "td",
        { colspan: "9" },
        el(
          "div",
          { class: "detail-grid" },
          el(
            "div",
            {},
            el("h4", {}, "Cashflows"),
            row.cashflows.length === 0
              ? el("p", { class: "hint" }, "Nothing settled yet.")
              : el(
                  "table",
                  { class: "data-table" },
                  headers("Date", "Leg", "Period", "Amount", "Direction", "Status"),
                  realizedBody,
                ),
          ),
          el(
            "div",
            {},
            el("h4", {}, "Projected"),
            el(
              "table",
              { class: "data-table" },
              headers("Date", "Leg", "Period", "Amount", "Rate"),
              projectedBody,
            ),
          ),
        ),
      ),
    );
  }

  function renderTrades(rows: BlotterRow[]): void {
    clear(tradesBody);
    for (const row of rows) {
      const toggle = el("button", { type: "button", class: "link" }, expanded.has(row.tradeId) ? "Hide" : "Show");
      toggle.addEventListener("click", () => {
        if (expanded.has(row.tradeId)) expanded.delete(row.tradeId);
        else expanded.add(row.tradeId);
        poller.poke();
      });
      tradesBody.append(
        el(
          "tr",
          { "data-testid": `trade-${row.tradeId}` },
          el("td", {}, row.tradeId),
          el("td", {}, row.counterpartyNames.join(" / ")),
          el("td", {}, row.productType),
          el("td", { class: `status status-${row.status.toLowerCase()}` }, row.status),
          el("td", { class: "num" }, `${row.notional} ${row.currency}`),
          el("td", { class: "num" }, row.fixedRate),
          el("td", {}, `${row.floatingIndex} ${row.floatingTenorMonths}M + ${row.floatingSpread}`),
          el("td", {}, `${row.effectiveDate} → ${row.terminationDate}`),
          el("td", {}, consentButtons(row), " ", toggle),
        ),
      );
      if (expanded.has(row.tradeId)) tradesBody.append(detailRow(row));
    }
  }

  // -- page layout -------------------------------------------------------------

  root.append(
    el("h2", {}, "Blotter"),
    el(
      "div",
      { class: "widgets" },
      el(
        "section",
        { class: "widget" },
        el("h3", {}, "Clock"),
        clockTime,
        el("div", {}, forwardButton, " ", playButton),
      ),
      el("section", { class: "widget" }, el("h3", {}, "Next deadline"), deadlineName, deadlineTime),
      el(
        "section",
        { class: "widget widget-wide" },
        el("h3", {}, "Event stream"),
        el("label", { class: "toggle" }, cdmToggle, " CDM events only"),
        el(
          "div",
          { class: "scroll-box" },
          el(
            "table",
            { class: "data-table" },
            el("thead", {}, el("tr", {}, el("th", {}, "Seq"), el("th", {}, "Event"), el("th", {}, "CDM type"))),
            eventsBody,
          ),
        ),
      ),
    ),
    el(
      "section",
      { class: "card" },
      el(
        "table",
        { class: "data-table" },
        el(
          "thead",
          {},
          el(
            "tr",
            {},
            el("th", {}, "Trade"),
            el("th", {}, "Counterparties"),
            el("th", {}, "Product"),
            el("th", {}, "Status"),
            el("th", {}, "Notional"),
            el("th", {}, "Fixed rate"),
            el("th", {}, "Floating"),
            el("th", {}, "Dates"),
            el("th", {}, "Actions"),
          ),
        ),
        tradesBody,
      ),
    ),
  );

  async function refresh(): Promise<void> {
    const [clockResult, deadlineResult, eventsResult, tradesResult] = await Promise.allSettled([
      ctx.api.clock(),
      ctx.api.nextDeadline(),
      ctx.api.events(25, cdmOnly),
      ctx.api.trades(),
    ]);

    if (clockResult.status === "fulfilled") {
      clockExists = true;
      clockTime.textContent = fmtTime(clockResult.value.currentTime);
    } else {
      clockExists = false;
      const err = clockResult.reason;
      clockTime.textContent =
        err instanceof ApiError && err.code === "NO_CLOCK" ? "No clock" : String(err);
    }
    forwardButton.disabled = !clockExists;
    playButton.disabled = !clockExists;

    if (deadlineResult.status === "fulfilled") {
      const deadline = deadlineResult.value.deadline;
      if (deadline === null) {
        deadlineName.textContent = "None";
        deadlineTime.textContent = "";
      } else {
        deadlineName.textContent = `${deadline.name} · ${deadline.tradeId}`;
        deadlineTime.textContent = `due ${fmtTime(deadline.dueTime)}`;
      }
    }
    if (eventsResult.status === "fulfilled") renderEvents(eventsResult.value);
    if (tradesResult.status === "fulfilled") renderTrades(tradesResult.value);
  }

  const poller = new Poller(refresh);
  poller.start();
  return { refresh, dispose: () => poller.stop() };
}
