/**
 * Thin typed client for the review service.
 *
 * Every UI action maps to exactly one call here, and every call is exactly
 * one HTTP request; there is no client-side caching layer that could drift
 * from server truth.
 */
import type {
  BlacklistState,
  BlacklistUpdate,
  DecisionResponse,
  DictionaryEntryView,
  ExportResponse,
  SessionDetail,
  SessionSummary,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(`API error ${status}: ${detail}`);
    this.status = status;
  }
}

/** Subset of the fetch signature the client needs; injectable for tests. */
export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function errorDetail(resp: Response): Promise<string> {
  try {
    const body = (await resp.json()) as { detail?: string };
    return body.detail ?? resp.statusText;
  } catch {
    return resp.statusText;
  }
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base = "", fetchImpl?: FetchLike) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, init);
    if (!resp.ok) {
      throw new ApiError(resp.status, await errorDetail(resp));
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  listSessions(): Promise<SessionSummary[]> {
    return this.request("/sessions");
  }

  getSession(sessionId: string): Promise<SessionDetail> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}`);
  }

  postDecision(
    sessionId: string,
    itemKey: string,
    choice: string,
    decidedBy = "",
  ): Promise<DecisionResponse> {
    const path =
      `/sessions/${encodeURIComponent(sessionId)}` +
      `/items/${encodeURIComponent(itemKey)}/decision`;
    return this.post(path, { choice, decided_by: decidedBy });
  }

  exportSession(sessionId: string): Promise<ExportResponse> {
    return this.post(`/sessions/${encodeURIComponent(sessionId)}/export`, {});
  }

  getBlacklist(): Promise<BlacklistState> {
    return this.request("/blacklist");
  }

  addToBlacklist(surface: string): Promise<BlacklistUpdate> {
    return this.post("/blacklist", { surface });
  }

  getDictionary(kind?: "abbreviation" | "phrase"): Promise<DictionaryEntryView[]> {
    const query = kind ? `?kind=${encodeURIComponent(kind)}` : "";
    return this.request(`/dictionary${query}`);
  }
}
