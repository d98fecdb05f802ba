/** Typed fetch client for the simulator API. */

import type {
  BlotterRow,
  ClockState,
  EventStreamRow,
  NextDeadlineResponse,
  Party,
  TradeDocument,
  TriggerReport,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
    readonly details?: unknown,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

interface BaseSource {
  location: { search: string };
  localStorage: {
    getItem(key: string): string | null;
    setItem(key: string, value: string): void;
  };
  SWAPSIM_API_BASE?: string;
}

/** Where the API lives. Priority: ?api= query parameter (remembered),
 * a previously remembered choice, a window.SWAPSIM_API_BASE global set by
 * the host page, then same-origin. */
export function resolveApiBase(win: BaseSource = window): string {
  const params = new URLSearchParams(win.location.search);
  const fromQuery = params.get("api");
  if (fromQuery !== null) {
    win.localStorage.setItem("swapsim.apiBase", fromQuery);
    return stripSlash(fromQuery);
  }
  const remembered = win.localStorage.getItem("swapsim.apiBase");
  if (remembered !== null) return stripSlash(remembered);
  if (win.SWAPSIM_API_BASE) return stripSlash(win.SWAPSIM_API_BASE);
  return "";
}

function stripSlash(base: string): string {
  return base.endsWith("/") ? base.slice(0, -1) : base;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    readonly base: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, {
        method,
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError("NETWORK", `cannot reach ${this.base || "the API"}: ${String(err)}`, 0);
    }
    if (response.status === 204) return undefined as T;
    const text = await response.text();
    let parsed: unknown = undefined;
    if (text !== "") {
      try {
        parsed = JSON.parse(text);
      } catch {
        parsed = undefined;
      }
    }
    if (!response.ok) {
      const err = parsed as { code?: string; message?: string; details?: unknown } | undefined;
      throw new ApiError(
        err?.code ?? `HTTP_${response.status}`,
        err?.message ?? `request failed with status ${response.status}`,
        response.status,
        err?.details,
      );
    }
    return parsed as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/health");
  }

  resetSimulation(seed?: number): Promise<{ seed: number }> {
    return this.request("POST", "/simulation/reset", seed === undefined ? {} : { seed });
  }

  clock(): Promise<ClockState> {
    return this.request("GET", "/clock");
  }

  createClock(initialTime: string): Promise<ClockState> {
    return this.request("POST", "/clock", { initialTime });
  }

  advanceClock(time: string): Promise<TriggerReport> {
    return this.request("POST", "/clock/advance", { time });
  }

  forward(): Promise<TriggerReport> {
    return this.request("POST", "/clock/forward");
  }

  play(): Promise<TriggerReport> {
    return this.request("POST", "/clock/play");
  }

  parties(): Promise<Party[]> {
    return this.request("GET", "/parties");
  }

  registerParty(name: string, legalEntityId: string): Promise<Party> {
    return this.request("POST", "/parties", { name, legalEntityId });
  }

  updateParty(partyId: string, name: string, legalEntityId: string): Promise<Party> {
    return this.request("PUT", `/parties/${encodeURIComponent(partyId)}`, {
      name,
      legalEntityId,
    });
  }

  deleteParty(partyId: string): Promise<void> {
    return this.request("DELETE", `/parties/${encodeURIComponent(partyId)}`);
  }

  trades(): Promise<BlotterRow[]> {
    return this.request("GET", "/trades");
  }

  trade(tradeId: string): Promise<BlotterRow> {
    return this.request("GET", `/trades/${encodeURIComponent(tradeId)}`);
  }

  submitTrade(document: TradeDocument): Promise<BlotterRow> {
    return this.request("POST", "/trades", document);
  }

  consent(tradeId: string, decision: "CONFIRM" | "REJECT"): Promise<BlotterRow> {
    return this.request("POST", `/trades/${encodeURIComponent(tradeId)}/consent`, { decision });
  }

  events(limit = 25, cdmOnly = false): Promise<EventStreamRow[]> {
    return this.request("GET", `/events?limit=${limit}&cdmOnly=${cdmOnly}`);
  }

  nextDeadline(): Promise<NextDeadlineResponse> {
    return this.request("GET", "/deadlines/next");
  }
}
