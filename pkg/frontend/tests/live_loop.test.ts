/** The live-control loop against the scripted mock backend:
 * start -> WS samples move the gauges (well under 500 ms) -> stop ->
 * session shows up in the browser list -> timeline scrubs issue the right
 * range queries. */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { AppStore } from "../src/store.js";
import { TimelineController } from "../src/timeline.js";
import { cognitionSample, frameSample, gsrSample, MockBackend } from "./mock_backend.js";

function makeStore(backend: MockBackend): AppStore {
  const api = new ApiClient("", backend.fetch, backend.wsFactory);
  return new AppStore(api);
}

describe("live control loop", () => {
  it("start, gauge updates within 500 ms of delivery, stop, browse", async () => {
    const backend = new MockBackend();
    const store = makeStore(backend);

    const sessionId = await store.startSession({ duration_ms: 10_000 });
    expect(sessionId).toBe(backend.nextSessionId);

    const socket = backend.lastSocket();
    expect(socket.url).toContain(`/live/${sessionId}`);
    socket.serverOpen();
    expect(store.get().live.connected).toBe(true);

    const delivered = Date.now();
    socket.serverSend({ type: "sample", envelope: cognitionSample(500, 0, 0.9) });
    const state = store.get();
    expect(state.live.gauges?.stress).toBe(0.9);
    expect(state.live.gauges?.engagement).toBe(0.5);
    expect(state.live.gaugesUpdatedAt - delivered).toBeLessThan(500);

    socket.serverSend({ type: "sample", envelope: gsrSample(1000, 0, 6.25) });
    expect(store.get().live.gsrUs).toBe(6.25);

    socket.serverSend({ type: "sample", envelope: frameSample(1000, 0) });
    expect(store.get().live.lastFrame?.seq_in_stream).toBe(0);

    socket.serverSend({ type: "drops", count: 3 });
    expect(store.get().live.dropped).toBe(3);

    await store.stopSession(sessionId!);
    const sessions = store.get().sessions;
    expect(sessions.map((s) => s.session_id)).toContain(sessionId);
    expect(sessions[0]!.status).toBe("closed");

    // Server announces the end of the feed; the UI marks it closed.
    socket.serverSend({ type: "closed", dropped: 3 });
    expect(store.get().live.closed).toBe(true);
  });

  it("second stop is a 409 and does not clobber state", async () => {
    const backend = new MockBackend();
    const store = makeStore(backend);
    const sessionId = await store.startSession({});
    await store.stopSession(sessionId!);
    await store.stopSession(sessionId!); // tolerated: already stopped
    expect(store.get().lastError).toBeNull();
    expect(store.get().sessions[0]!.status).toBe("closed");
  });

  it("backend down flips the health flag that disables controls", async () => {
    const backend = new MockBackend();
    backend.healthy = false;
    const store = makeStore(backend);
    expect(await store.checkHealth()).toBe(false);
    expect(store.get().backendUp).toBe(false);
    backend.healthy = true;
    expect(await store.checkHealth()).toBe(true);
  });

  it("timeline scrub to [10 s, 20 s] issues from_ms=10000&to_ms=20000", async () => {
    const backend = new MockBackend();
    const sessionId = "22222222-2222-2222-2222-222222222222";
    backend.samples.set(sessionId, [
      gsrSample(9_000, 9, 5.0),
      gsrSample(12_000, 12, 6.0),
      cognitionSample(15_000, 30, 0.7),
      gsrSample(21_000, 21, 7.0),
    ]);
    const api = new ApiClient("", backend.fetch, backend.wsFactory);
    const controller = new TimelineController(api, sessionId, 60_000);
    const tracks = await controller.scrubTo(10_000, 20_000);

    const sampleUrls = backend.urls().filter((u) => u.includes("/samples"));
    expect(sampleUrls).toHaveLength(1);
    expect(sampleUrls[0]).toContain("from_ms=10000");
    expect(sampleUrls[0]).toContain("to_ms=20000");

    // Only the in-window samples came back and were bucketed.
    expect(tracks.gsr.map((p) => p.t_ms)).toEqual([12_000]);
    expect(tracks.cognition["stress"]!.map((p) => p.t_ms)).toEqual([15_000]);
  });

  it("consent CRUD round-trips through the store", async () => {
    const backend = new MockBackend();
    const store = makeStore(backend);
    const record = {
      person_id: "alice",
      face_signature: "sig:alice",
      scope_global: true,
      granted_to: [],
    };
    expect(await store.addConsent(record)).toBe(true);
    expect(store.get().consent).toHaveLength(1);
    expect(await store.addConsent(record)).toBe(false); // duplicate -> 409 surfaced
    await store.removeConsent("alice");
    expect(store.get().consent).toHaveLength(0);
  });
});
