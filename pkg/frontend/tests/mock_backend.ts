/** Scripted mock of the control service for UI tests: a fetch impl that
 * serves canned state and records every request, plus a controllable fake
 * WebSocket. */

import type { FetchLike, WebSocketFactory } from "../src/api.js";
import type { ConsentRecord, Envelope, SessionSummary } from "../src/types.js";

export class FakeWebSocket {
  static CONNECTING = 0;
  static OPEN = 1;
  static CLOSED = 3;
  readyState = FakeWebSocket.CONNECTING;
  onopen: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: string }) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;
  sent: string[] = [];

  constructor(public url: string) {}

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    if (this.readyState === FakeWebSocket.CLOSED) return;
    this.readyState = FakeWebSocket.CLOSED;
    this.onclose?.();
  }

  // test-side controls
  serverOpen(): void {
    this.readyState = FakeWebSocket.OPEN;
    this.onopen?.();
  }

  serverSend(message: unknown): void {
    this.onmessage?.({ data: JSON.stringify(message) });
  }

  serverClose(): void {
    this.close();
  }
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function makeSession(id: string, overrides: Partial<SessionSummary> = {}): SessionSummary {
  return {
    session_id: id,
    subject_id: "anon-subject",
    started_at: "2026-08-10T10:00:00Z",
    status: "open",
    duration_ms: 0,
    segment_count: 0,
    attested_count: 0,
    quarantined_count: 0,
    unanalyzed_count: 0,
    scenario_seed: 0,
    segments: [],
    ...overrides,
  };
}

export class MockBackend {
  healthy = true;
  sessions = new Map<string, SessionSummary>();
  samples = new Map<string, Envelope[]>();
  consent: ConsentRecord[] = [];
  requests: { method: string; url: string; body: unknown }[] = [];
  sockets: FakeWebSocket[] = [];
  nextSessionId = "11111111-1111-1111-1111-111111111111";

  readonly fetch: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    this.requests.push({ method, url, body });
    const parsed = new URL(url, "http://mock");
    const path = parsed.pathname;

    if (!this.healthy) return new Response("down", { status: 503 });

    if (path === "/health") return json({ ok: true });

    if (path === "/sessions" && method === "POST") {
      const id = this.nextSessionId;
      this.sessions.set(id, makeSession(id, { status: "open" }));
      return json({ session_id: id }, 201);
    }
    if (path === "/sessions" && method === "GET") {
      return json([...this.sessions.values()]);
    }

    const stopMatch = /^\/sessions\/([^/]+)\/stop$/.exec(path);
    if (stopMatch && method === "POST") {
      const session = this.sessions.get(stopMatch[1]!);
      if (!session) return json({ detail: "unknown session" }, 404);
      if (session.status !== "open") return json({ detail: "already stopped" }, 409);
      session.status = "closed";
      return json({ session_id: session.session_id, status: "closed" });
    }

    const samplesMatch = /^\/sessions\/([^/]+)\/samples$/.exec(path);
    if (samplesMatch && method === "GET") {
      const all = this.samples.get(samplesMatch[1]!) ?? [];
      const streams = parsed.searchParams.get("streams")?.split(",");
      const fromMs = Number(parsed.searchParams.get("from_ms") ?? "-1");
      const toMs = parsed.searchParams.get("to_ms") ? Number(parsed.searchParams.get("to_ms")) : null;
      const filtered = all.filter(
        (s) =>
          (!streams || streams.includes(s.stream)) &&
          s.t_ms >= Math.max(0, fromMs) &&
          (toMs === null || s.t_ms < toMs),
      );
      return json({ samples: filtered, next_cursor: null });
    }

    const sessionMatch = /^\/sessions\/([^/]+)$/.exec(path);
    if (sessionMatch && method === "GET") {
      const session = this.sessions.get(sessionMatch[1]!);
      return session ? json(session) : json({ detail: "unknown session" }, 404);
    }

    const verifyMatch = /^\/sessions\/([^/]+)\/verify$/.exec(path);
    if (verifyMatch) {
      return json({ kind: "valid", seq: null, detail: "", verdict: "Valid" });
    }

    if (path === "/consent" && method === "GET") return json(this.consent);
    if (path === "/consent" && method === "POST") {
      if (this.consent.some((r) => r.person_id === (body as ConsentRecord).person_id)) {
        return json({ detail: "duplicate" }, 409);
      }
      this.consent.push(body as ConsentRecord);
      return json(body, 201);
    }
    const consentDelete = /^\/consent\/([^/]+)$/.exec(path);
    if (consentDelete && method === "DELETE") {
      const before = this.consent.length;
      this.consent = this.consent.filter((r) => r.person_id !== decodeURIComponent(consentDelete[1]!));
      return before === this.consent.length
        ? json({ detail: "not found" }, 404)
        : new Response(null, { status: 204 });
    }

    if (path === "/config" && method === "GET") return json({ image: { rate: 1.0 } });
    if (/^\/schemas\//.test(path)) return json({ type: "object" });

    return json({ detail: `unhandled ${method} ${path}` }, 404);
  };

  readonly wsFactory: WebSocketFactory = (url) => {
    const socket = new FakeWebSocket(url);
    this.sockets.push(socket);
    return socket as unknown as WebSocket;
  };

  lastSocket(): FakeWebSocket {
    const socket = this.sockets[this.sockets.length - 1];
    if (!socket) throw new Error("no websocket opened");
    return socket;
  }

  urls(): string[] {
    return this.requests.map((r) => r.url);
  }
}

export function cognitionSample(tMs: number, seq: number, stress: number): Envelope {
  return {
    stream: "cognition",
    t_ms: tMs,
    seq_in_stream: seq,
    payload: {
      engagement: 0.5,
      excitement: 0.5,
      stress,
      relaxation: 0.5,
      interest: 0.5,
      focus: 0.5,
    },
  };
}

export function gsrSample(tMs: number, seq: number, value: number): Envelope {
  return { stream: "gsr", t_ms: tMs, seq_in_stream: seq, payload: { conductance_us: value } };
}

export function frameSample(tMs: number, seq: number): Envelope {
  return {
    stream: "image-frame",
    t_ms: tMs,
    seq_in_stream: seq,
    payload: {
      media: { relative_path: `media/ab/abc${seq}.jpg`, content_hash: "ab".repeat(32), byte_len: 1000 },
      width_px: 320,
      height_px: 240,
      blurred_regions: [{ x: 10, y: 10, w: 32, h: 32 }],
    },
  };
}
