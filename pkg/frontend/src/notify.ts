/** Dismissible error banners and short-lived success toasts, rendered into
 * one shared region at the top of the page. */

import { el } from "./dom.js";

export class Notifier {
  constructor(private readonly region: HTMLElement) {}

  error(message: string): void {
    const banner = el("div", { class: "banner banner-error", role: "alert" }, message);
    const dismiss = el("button", { class: "banner-dismiss", type: "button" }, "×");
    dismiss.addEventListener("click", () => banner.remove());
    banner.append(dismiss);
    this.region.append(banner);
  }

  toast(message: string): void {
    const banner = el("div", { class: "banner banner-toast" }, message);
    this.region.append(banner);
    setTimeout(() => banner.remove(), 4000);
  }

  clear(): void {
    while (this.region.firstChild) this.region.removeChild(this.region.firstChild);
  }
}
