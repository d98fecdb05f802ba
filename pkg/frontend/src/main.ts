import { ApiClient, resolveApiBase } from "./api.js";
import { el } from "./dom.js";
import { Notifier } from "./notify.js";
import { mountBlotterPage } from "./pages/blotter.js";
import { mountExecutionPage } from "./pages/execution.js";
import { mountHarnessPage } from "./pages/harness.js";
import { mountNetworkPage } from "./pages/network.js";
import { startRouter, type Route } from "./router.js";

const ROUTES: Route[] = [
  { name: "harness", label: "Harness", mount: mountHarnessPage },
  { name: "network", label: "Network", mount: mountNetworkPage },
  { name: "execution", label: "Execution", mount: mountExecutionPage },
  { name: "blotter", label: "Blotter", mount: mountBlotterPage },
];

function start(): void {
  const base = resolveApiBase();
  const api = new ApiClient(base);

  const nav = el("nav", {}, ...ROUTES.map((route) => el("a", { href: `#/${route.name}` }, route.label)));
  const banners = el("div", { id: "banners" });
  const page = el("main", { id: "page" });
  document.body.append(
    el(
      "header",
      {},
      el("h1", {}, "swapsim console"),
      nav,
      el("span", { class: "api-base" }, base === "" ? "same-origin API" : base),
    ),
    banners,
    page,
  );

  startRouter(ROUTES, page, nav, { api, notify: new Notifier(banners) });
}

start();
