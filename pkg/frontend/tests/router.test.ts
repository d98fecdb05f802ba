import { afterEach, beforeEach, describe, expect, it } from "vitest";

import type { PageContext, PageHandle } from "../src/page.js";
import { routeNameFromHash, startRouter } from "../src/router.js";
import type { Route, RouterHandle } from "../src/router.js";
import { bench } from "./helpers.js";

interface SpyRoute extends Route {
  mounts: number;
  disposals: number;
}

function spyRoute(name: string): SpyRoute {
  const route: SpyRoute = {
    name,
    label: name,
    mounts: 0,
    disposals: 0,
    mount(root: HTMLElement): PageHandle {
      route.mounts += 1;
      root.append(document.createTextNode(`page ${name}`));
      return {
        refresh: () => Promise.resolve(),
        dispose: () => {
          route.disposals += 1;
        },
      };
    },
  };
  return route;
}

function navFor(routes: Route[]): HTMLElement {
  const nav = document.createElement("nav");
  for (const route of routes) {
    const link = document.createElement("a");
    link.setAttribute("href", `#/${route.name}`);
    link.textContent = route.label;
    nav.append(link);
  }
  return nav;
}

function goTo(hash: string): void {
  window.location.hash = hash;
  window.dispatchEvent(new Event("hashchange"));
}

describe("routeNameFromHash", () => {
  it("extracts the page name and tolerates junk", () => {
    expect(routeNameFromHash("#/blotter")).toBe("blotter");
    expect(routeNameFromHash("#/network?x=1")).toBe("network");
    expect(routeNameFromHash("")).toBe("");
    expect(routeNameFromHash("#nonsense")).toBe("");
  });
});

describe("router", () => {
  let routes: SpyRoute[];
  let nav: HTMLElement;
  let container: HTMLElement;
  let ctx: PageContext;
  let handle: RouterHandle | null = null;

  beforeEach(() => {
    window.location.hash = "";
    const t = bench();
    ctx = t.ctx;
    routes = [spyRoute("one"), spyRoute("two")];
    nav = navFor(routes);
    container = t.root;
    document.body.append(nav);
  });

  afterEach(() => {
    handle?.dispose();
    handle = null;
  });

  it("mounts the first route by default and marks its nav link active", () => {
    handle = startRouter(routes, container, nav, ctx);
    expect(routes[0].mounts).toBe(1);
    expect(container.textContent).toBe("page one");
    expect(nav.querySelector('a[href="#/one"]')?.classList.contains("active")).toBe(true);
    expect(nav.querySelector('a[href="#/two"]')?.classList.contains("active")).toBe(false);
  });

  it("switches pages on hash change, disposing the page it replaces", () => {
    handle = startRouter(routes, container, nav, ctx);
    goTo("#/two");
    expect(routes[0].disposals).toBe(1);
    expect(routes[1].mounts).toBe(1);
    expect(container.textContent).toBe("page two");
    expect(nav.querySelector('a[href="#/two"]')?.classList.contains("active")).toBe(true);
  });

  it("falls back to the first route for an unknown hash", () => {
    window.location.hash = "#/nowhere";
    handle = startRouter(routes, container, nav, ctx);
    expect(routes[0].mounts).toBe(1);
    expect(container.textContent).toBe("page one");
  });

  it("clears stale banners when the page changes", () => {
    handle = startRouter(routes, container, nav, ctx);
    ctx.notify.error("boom");
    expect(document.querySelectorAll(".banner").length).toBe(1);
    goTo("#/two");
    expect(document.querySelectorAll(".banner").length).toBe(0);
  });

  it("dispose stops routing and tears down the active page", () => {
    handle = startRouter(routes, container, nav, ctx);
    handle.dispose();
    expect(routes[0].disposals).toBe(1);
    goTo("#/two");
    expect(routes[1].mounts).toBe(0);
    handle = null;
  });
});
