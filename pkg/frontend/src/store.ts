/** Single reactive store: every view renders from here, every mutation goes
 * through an action. State derives solely from API responses. */

import { ApiClient, ApiError, frameMedia } from "./api.js";
import { LiveFeed } from "./live.js";
import type {
  CognitionKey,
  ConsentRecord,
  Envelope,
  LiveMessage,
  SessionSummary,
  VerifyResponse,
} from "./types.js";
import { COGNITION_KEYS } from "./types.js";

export interface LiveState {
  sessionId: string | null;
  connected: boolean;
  closed: boolean;
  gauges: Record<CognitionKey, number> | null;
  gaugesUpdatedAt: number;
  gsrUs: number | null;
  dropped: number;
  lastFrame: Envelope | null;
  samplesSeen: number;
}

export interface State {
  backendUp: boolean;
  sessions: SessionSummary[];
  live: LiveState;
  consent: ConsentRecord[];
  verifyResults: Record<string, VerifyResponse>;
  lastError: string | null;
  configDefaults: Record<string, unknown> | null;
}

const initialLive = (): LiveState => ({
  sessionId: null,
  connected: false,
  closed: false,
  gauges: null,
  gaugesUpdatedAt: 0,
  gsrUs: null,
  dropped: 0,
  lastFrame: null,
  samplesSeen: 0,
});

export const initialState = (): State => ({
  backendUp: true,
  sessions: [],
  live: initialLive(),
  consent: [],
  verifyResults: {},
  lastError: null,
  configDefaults: null,
});

export type Listener = (state: State) => void;

export class AppStore {
  private state: State = initialState();
  private listeners = new Set<Listener>();
  private feed: LiveFeed | null = null;

  constructor(
    public api: ApiClient,
    private now: () => number = () => Date.now(),
  ) {}

  get(): State {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  update(patch: Partial<State>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  private fail(error: unknown): void {
    const message =
      error instanceof ApiError
        ? `API ${error.status}: ${JSON.stringify(error.detail)}`
        : String(error);
    this.update({ lastError: message });
  }

  // -- backend health ------------------------------------------------------

  async checkHealth(): Promise<boolean> {
    try {
      await this.api.health();
      this.update({ backendUp: true });
      return true;
    } catch {
      this.update({ backendUp: false });
      return false;
    }
  }

  // -- sessions --------------------------------------------------------------

  async refreshSessions(): Promise<void> {
    try {
      this.update({ sessions: await this.api.listSessions(), lastError: null });
    } catch (error) {
      this.fail(error);
    }
  }

  async startSession(body: Parameters<ApiClient["startSession"]>[0]): Promise<string | null> {
    try {
      const { session_id } = await this.api.startSession(body);
      this.update({ lastError: null });
      this.attachLive(session_id);
      return session_id;
    } catch (error) {
      this.fail(error);
      return null;
    }
  }

  async stopSession(sessionId: string): Promise<void> {
    try {
      await this.api.stopSession(sessionId);
    } catch (error) {
      // 409 just means it already finished; surface anything else.
      if (!(error instanceof ApiError) || error.status !== 409) {
        this.fail(error);
        return;
      }
    }
    await this.refreshSessions();
  }

  async verifySession(sessionId: string): Promise<void> {
    try {
      const verdict = await this.api.verify(sessionId);
      this.update({ verifyResults: { ...this.state.verifyResults, [sessionId]: verdict } });
    } catch (error) {
      this.fail(error);
    }
  }

  // -- live view -------------------------------------------------------------

  attachLive(sessionId: string): void {
    this.detachLive();
    this.update({ live: { ...initialLive(), sessionId } });
    this.feed = new LiveFeed(
      () => this.api.liveSocket(sessionId, ["cognition", "gsr", "image-frame"]),
      (message) => this.onLiveMessage(message),
      (connected) => this.update({ live: { ...this.state.live, connected } }),
    );
    this.feed.connect();
  }

  detachLive(): void {
    this.feed?.close();
    this.feed = null;
  }

  onLiveMessage(message: LiveMessage): void {
    const live = { ...this.state.live };
    if (message.type === "drops") {
      live.dropped = message.count;
    } else if (message.type === "closed") {
      live.dropped = Math.max(live.dropped, message.dropped);
      live.closed = true;
    } else {
      const envelope = message.envelope;
      live.samplesSeen += 1;
      if (envelope.stream === "cognition") {
        const gauges = {} as Record<CognitionKey, number>;
        for (const key of COGNITION_KEYS) gauges[key] = Number(envelope.payload[key]);
        live.gauges = gauges;
        live.gaugesUpdatedAt = this.now();
      } else if (envelope.stream === "gsr") {
        live.gsrUs = Number(envelope.payload["conductance_us"]);
      } else if (envelope.stream === "image-frame" && frameMedia(envelope)) {
        live.lastFrame = envelope;
      }
    }
    this.update({ live });
    if (message.type === "closed") {
      void this.refreshSessions();
    }
  }

  // -- consent ----------------------------------------------------------------

  async refreshConsent(): Promise<void> {
    try {
      this.update({ consent: await this.api.listConsent(), lastError: null });
    } catch (error) {
      this.fail(error);
    }
  }

  async addConsent(record: ConsentRecord): Promise<boolean> {
    try {
      await this.api.addConsent(record);
      await this.refreshConsent();
      return true;
    } catch (error) {
      this.fail(error);
      return false;
    }
  }

  async removeConsent(personId: string): Promise<void> {
    try {
      await this.api.removeConsent(personId);
      await this.refreshConsent();
    } catch (error) {
      this.fail(error);
    }
  }

  async loadConfigDefaults(): Promise<void> {
    try {
      this.update({ configDefaults: await this.api.getConfig() });
    } catch (error) {
      this.fail(error);
    }
  }
}
