/** Harness page: start a fresh simulation run and create the virtual clock. */

import { ApiError } from "../api.js";
import { el, fmtTime } from "../dom.js";
import type { PageContext, PageHandle } from "../page.js";
import { withPending } from "../pending.js";
import { Poller } from "../poller.js";

export function mountHarnessPage(root: HTMLElement, ctx: PageContext): PageHandle {
  const clockStatus = el("p", { class: "status-line", "data-testid": "clock-status" }, "…");

  const seedInput = el("input", {
    type: "number",
    placeholder: "keep current seed",
    "data-testid": "seed-input",
  });
  const resetButton = el("button", { type: "button", "data-testid": "reset-button" }, "Reset simulation");
  resetButton.addEventListener("click", () => {
    void withPending(resetButton, ctx.notify, async () => {
      const seedText = seedInput.value.trim();
      const result = await ctx.api.resetSimulation(seedText === "" ? undefined : Number(seedText));
      ctx.notify.toast(`Simulation reset (seed ${result.seed})`);
      poller.poke();
    });
  });

  const timeInput = el("input", {
    type: "datetime-local",
    value: "2024-01-10T00:00",
    "data-testid": "clock-time-input",
  });
  const createButton = el("button", { type: "button", "data-testid": "create-clock-button" }, "Create clock");
  createButton.addEventListener("click", () => {
    void withPending(createButton, ctx.notify, async () => {
      const created = await ctx.api.createClock(timeInput.value);
      ctx.notify.toast(`Clock created at ${fmtTime(created.currentTime)}`);
      poller.poke();
    });
  });

  root.append(
    el("h2", {}, "Simulation harness"),
    el(
      "section",
      { class: "card" },
      el("h3", {}, "Run"),
      el("p", { class: "hint" }, "Erases all trades, deadlines, and the clock. Parties survive."),
      el("div", { class: "form-row" }, el("label", {}, "Seed"), seedInput, resetButton),
    ),
    el(
      "section",
      { class: "card" },
      el("h3", {}, "Clock"),
      clockStatus,
      el("div", { class: "form-row" }, el("label", {}, "Initial time"), timeInput, createButton),
    ),
  );

  async function refresh(): Promise<void> {
    try {
      const clock = await ctx.api.clock();
      clockStatus.textContent = `Clock at ${fmtTime(clock.currentTime)}`;
    } catch (err) {
      if (err instanceof ApiError && err.code === "NO_CLOCK") {
        clockStatus.textContent = "No clock. Create one to start the run.";
      } else {
        clockStatus.textContent = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
      }
    }
  }

  const poller = new Poller(refresh);
  poller.start();
  return { refresh, dispose: () => poller.stop() };
}
