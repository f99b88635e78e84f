/** Thin typed client for the control service. fetch and WebSocket are
 * injectable so tests can run against a scripted mock backend. */

import type {
  ConsentRecord,
  Envelope,
  RateReport,
  SamplesPage,
  SessionSummary,
  VerifyResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;
export type WebSocketFactory = (url: string) => WebSocket;

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown,
  ) {
    super(`API error ${status}`);
  }
}

export interface StartSessionBody {
  config?: Record<string, unknown>;
  scenario?: Record<string, unknown>;
  realtime?: boolean;
  duration_ms?: number;
  seed?: number;
}

export interface SampleQuery {
  streams?: string[];
  from_ms?: number;
  to_ms?: number;
  cursor?: string;
  limit?: number;
}

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
    private wsFactory: WebSocketFactory = (url) => new WebSocket(url),
    private token: string | null = null,
  ) {}

  private headers(json: boolean): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    return headers;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(this.base + path, {
      method,
      headers: this.headers(body !== undefined),
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let detail: unknown = null;
      try {
        detail = (await response.json()) as { detail?: unknown };
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, (detail as { detail?: unknown })?.detail ?? detail);
    }
    if (response.status === 204) return undefined as T;
    return (await response.json()) as T;
  }

  health(): Promise<{ ok: boolean }> {
    return this.request("GET", "/health");
  }

  startSession(body: StartSessionBody): Promise<{ session_id: string }> {
    return this.request("POST", "/sessions", body);
  }

  stopSession(sessionId: string): Promise<{ session_id: string; status: string }> {
    return this.request("POST", `/sessions/${sessionId}/stop`);
  }

  listSessions(): Promise<SessionSummary[]> {
    return this.request("GET", "/sessions");
  }

  getSession(sessionId: string): Promise<SessionSummary> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  samples(sessionId: string, query: SampleQuery = {}): Promise<SamplesPage> {
    const params = new URLSearchParams();
    if (query.streams?.length) params.set("streams", query.streams.join(","));
    if (query.from_ms !== undefined) params.set("from_ms", String(query.from_ms));
    if (query.to_ms !== undefined) params.set("to_ms", String(query.to_ms));
    if (query.cursor) params.set("cursor", query.cursor);
    if (query.limit !== undefined) params.set("limit", String(query.limit));
    const qs = params.toString();
    return this.request("GET", `/sessions/${sessionId}/samples${qs ? `?${qs}` : ""}`);
  }

  rateReport(sessionId: string): Promise<RateReport> {
    return this.request("GET", `/sessions/${sessionId}/rate-report`);
  }

  verify(sessionId: string): Promise<VerifyResponse> {
    return this.request("GET", `/sessions/${sessionId}/verify`);
  }

  getConfig(): Promise<Record<string, unknown>> {
    return this.request("GET", "/config");
  }

  putConfig(config: Record<string, unknown>): Promise<Record<string, unknown>> {
    return this.request("PUT", "/config", config);
  }

  listConsent(): Promise<ConsentRecord[]> {
    return this.request("GET", "/consent");
  }

  addConsent(record: ConsentRecord): Promise<ConsentRecord> {
    return this.request("POST", "/consent", record);
  }

  removeConsent(personId: string): Promise<void> {
    return this.request("DELETE", `/consent/${encodeURIComponent(personId)}`);
  }

  getSchema(name: string): Promise<Record<string, unknown>> {
    return this.request("GET", `/schemas/${name}`);
  }

  mediaUrl(sessionId: string, media: { relative_path: string }): string {
    const sub = media.relative_path.replace(/^media\//, "");
    return `${this.base}/sessions/${sessionId}/media/${sub}`;
  }

  liveSocket(sessionId: string, streams?: string[], capacity?: number): WebSocket {
    const params = new URLSearchParams();
    if (streams?.length) params.set("streams", streams.join(","));
    if (capacity !== undefined) params.set("capacity", String(capacity));
    if (this.token) params.set("token", this.token);
    const qs = params.toString();
    const wsBase = this.base.replace(/^http/, "ws") || inferWsBase();
    return this.wsFactory(`${wsBase}/live/${sessionId}${qs ? `?${qs}` : ""}`);
  }
}

function inferWsBase(): string {
  if (typeof location !== "undefined") {
    return location.origin.replace(/^http/, "ws");
  }
  return "ws://127.0.0.1:8787";
}

/** Frame envelopes expose their media ref in the payload. */
export function frameMedia(envelope: Envelope): { relative_path: string } | null {
  const media = envelope.payload["media"];
  if (media && typeof media === "object" && "relative_path" in media) {
    return media as { relative_path: string };
  }
  return null;
}
