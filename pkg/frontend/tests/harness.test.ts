import { afterEach, describe, expect, it } from "vitest";

import { mountHarnessPage } from "../src/pages/harness.js";
import { bannerTexts, bench, byTestId, disposeAll, tick, track } from "./helpers.js";

afterEach(disposeAll);

describe("harness page", () => {
  it("reports when no clock exists yet", async () => {
    const { root, ctx } = bench();
    const page = track(mountHarnessPage(root, ctx));
    await page.refresh();
    expect(byTestId(root, "clock-status").textContent).toContain("No clock");
  });

  it("creates the clock from the date-time input and shows it", async () => {
    const { server, root, ctx, banners } = bench();
    const page = track(mountHarnessPage(root, ctx));
    byTestId<HTMLInputElement>(root, "clock-time-input").value = "2024-01-10T00:00";
    byTestId<HTMLButtonElement>(root, "create-clock-button").click();
    await tick();
    expect(server.callsTo("POST", "/clock")[0]?.body).toEqual({ initialTime: "2024-01-10T00:00" });
    expect(bannerTexts(banners).join(" ")).toContain("Clock created at 2024-01-10 00:00:00");
    await page.refresh();
    expect(byTestId(root, "clock-status").textContent).toBe("Clock at 2024-01-10 00:00:00");
  });

  it("surfaces ALREADY_EXISTS as a dismissible banner on a second create", async () => {
    const { server, root, ctx, banners } = bench();
    server.clock = { clockId: "simulation-clock", currentTime: "2024-01-10T00:00:00" };
    track(mountHarnessPage(root, ctx));
    byTestId<HTMLButtonElement>(root, "create-clock-button").click();
    await tick();
    const texts = bannerTexts(banners);
    expect(texts.some((t) => t.includes("ALREADY_EXISTS"))).toBe(true);
    const dismiss = banners.querySelector<HTMLButtonElement>(".banner-dismiss");
    dismiss?.click();
    expect(banners.querySelectorAll(".banner-error").length).toBe(0);
  });

  it("resets the run, passing the seed only when one is typed", async () => {
    const { server, root, ctx } = bench();
    server.clock = { clockId: "simulation-clock", currentTime: "2024-01-10T00:00:00" };
    track(mountHarnessPage(root, ctx));
    byTestId<HTMLButtonElement>(root, "reset-button").click();
    await tick();
    expect(server.callsTo("POST", "/simulation/reset")[0]?.body).toEqual({});
    expect(server.clock).toBeNull();

    byTestId<HTMLInputElement>(root, "seed-input").value = "7";
    byTestId<HTMLButtonElement>(root, "reset-button").click();
    await tick();
    expect(server.callsTo("POST", "/simulation/reset")[1]?.body).toEqual({ seed: 7 });
  });

  it("disables the create button while the request is in flight", async () => {
    const { server, root, ctx } = bench();
    const release = server.defer("POST", "/clock");
    track(mountHarnessPage(root, ctx));
    const button = byTestId<HTMLButtonElement>(root, "create-clock-button");
    button.click();
    await tick();
    expect(button.disabled).toBe(true);
    release();
    await tick();
    expect(button.disabled).toBe(false);
  });
});
