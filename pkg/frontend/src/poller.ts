/** Repeats an async refresh on a fixed interval (2s by default), with an
 * immediate first run and a poke() for right-after-a-command refreshes.
 * Overlapping runs are skipped rather than queued. */

export const POLL_INTERVAL_MS = 2000;

export class Poller {
  private timer: ReturnType<typeof setInterval> | null = null;
  private inFlight = false;

  constructor(
    private readonly refresh: () => Promise<void>,
    private readonly intervalMs: number = POLL_INTERVAL_MS,
  ) {}

  start(): void {
    if (this.timer !== null) return;
    void this.run();
    this.timer = setInterval(() => void this.run(), this.intervalMs);
  }

  poke(): void {
    void this.run();
  }

  stop(): void {
    if (this.timer !== null) clearInterval(this.timer);
    this.timer = null;
  }

  private async run(): Promise<void> {
    if (this.inFlight) return;
    this.inFlight = true;
    try {
      await this.refresh();
    } catch {
      // refresh failures surface through the page's own status line
    } finally {
      this.inFlight = false;
    }
  }
}
