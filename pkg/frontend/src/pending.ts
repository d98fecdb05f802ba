/** Run a command from a button click, keeping the button disabled until the
 * request settles so a double click cannot double-submit. */

import { ApiError } from "./api.js";
import type { Notifier } from "./notify.js";

export async function withPending<T>(
  button: HTMLButtonElement,
  notify: Notifier,
  action: () => Promise<T>,
): Promise<T | undefined> {
  button.disabled = true;
  try {
    return await action();
  } catch (err) {
    if (err instanceof ApiError) {
      notify.error(`${err.code}: ${err.message}`);
      return undefined;
    }
    throw err;
  } finally {
    button.disabled = false;
  }
}
