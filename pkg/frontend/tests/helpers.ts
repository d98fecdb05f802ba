import { ApiClient } from "../src/api.js";
import { Notifier } from "../src/notify.js";
import type { PageContext, PageHandle } from "../src/page.js";
import { FakeApi } from "./fakeApi.js";

export interface TestBench {
  server: FakeApi;
  root: HTMLElement;
  banners: HTMLElement;
  ctx: PageContext;
}

export function bench(server: FakeApi = new FakeApi()): TestBench {
  document.body.innerHTML = "";
  const banners = document.createElement("div");
  const root = document.createElement("div");
  document.body.append(banners, root);
  const ctx: PageContext = { api: new ApiClient("", server.fetchFn), notify: new Notifier(banners) };
  return { server, root, banners, ctx };
}

const mounted: PageHandle[] = [];

export function track(handle: PageHandle): PageHandle {
  mounted.push(handle);
  return handle;
}

export function disposeAll(): void {
  for (const handle of mounted.splice(0)) handle.dispose();
}

export function bannerTexts(banners: HTMLElement): string[] {
  return Array.from(banners.querySelectorAll(".banner")).map((node) => node.textContent ?? "");
}

export function byTestId<T extends HTMLElement = HTMLElement>(root: HTMLElement, id: string): T {
  const node = root.querySelector(`[data-testid="${id}"]`);
  if (node === null) throw new Error(`no element with data-testid ${id}`);
  return node as T;
}

export function tick(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
