import type { ApiClient } from "./api.js";
import type { Notifier } from "./notify.js";

export interface PageContext {
  api: ApiClient;
  notify: Notifier;
}

/** What a mounted page hands back: one awaitable poll tick (the poller and
 * tests both drive it) and a teardown. */
export interface PageHandle {
  refresh(): Promise<void>;
  dispose(): void;
}
