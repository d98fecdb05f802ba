/** Hash router: #/harness, #/network, #/execution, #/blotter. Mounting a
 * page disposes the previous one so only the visible page polls. */

import { clear } from "./dom.js";
import type { PageContext, PageHandle } from "./page.js";

export interface Route {
  name: string;
  label: string;
  mount(root: HTMLElement, ctx: PageContext): PageHandle;
}

export function routeNameFromHash(hash: string): string {
  const match = /^#\/([a-z]+)/.exec(hash);
  return match === null ? "" : match[1];
}

export interface RouterHandle {
  current(): PageHandle | null;
  dispose(): void;
}

export function startRouter(
  routes: Route[],
  container: HTMLElement,
  nav: HTMLElement,
  ctx: PageContext,
  win: Window = window,
): RouterHandle {
  let active: PageHandle | null = null;

  function apply(): void {
    const name = routeNameFromHash(win.location.hash);
    const route = routes.find((r) => r.name === name) ?? routes[0];
    active?.dispose();
    clear(container);
    ctx.notify.clear();
    active = route.mount(container, ctx);
    for (const link of Array.from(nav.querySelectorAll("a"))) {
      link.classList.toggle("active", link.getAttribute("href") === `#/${route.name}`);
    }
  }

  win.addEventListener("hashchange", apply);
  apply();
  return {
    current: () => active,
    dispose: () => {
      win.removeEventListener("hashchange", apply);
      active?.dispose();
      active = null;
    },
  };
}
