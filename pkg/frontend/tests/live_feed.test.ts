/** LiveFeed reconnect behavior: exponential backoff, clean shutdown. */

import { describe, expect, it } from "vitest";

import { LiveFeed } from "../src/live.js";
import { FakeWebSocket } from "./mock_backend.js";

function harness() {
  const sockets: FakeWebSocket[] = [];
  const scheduled: { fn: () => void; delay: number }[] = [];
  const messages: unknown[] = [];
  const feed = new LiveFeed(
    () => {
      const socket = new FakeWebSocket("ws://mock/live/x");
      sockets.push(socket);
      return socket as unknown as WebSocket;
    },
    (message) => messages.push(message),
    () => {},
    (fn, delay) => {
      scheduled.push({ fn, delay });
      return 0 as unknown as ReturnType<typeof setTimeout>;
    },
  );
  return { feed, sockets, scheduled, messages };
}

describe("LiveFeed", () => {
  it("reconnects with doubling delays, capped", () => {
    const { feed, sockets, scheduled } = harness();
    feed.connect();
    expect(sockets).toHaveLength(1);

    sockets[0]!.serverOpen();
    sockets[0]!.serverClose(); // unexpected close
    expect(scheduled).toHaveLength(1);
    expect(scheduled[0]!.delay).toBe(500);

    scheduled[0]!.fn(); // reconnect attempt 1
    expect(sockets).toHaveLength(2);
    sockets[1]!.serverClose();
    expect(scheduled[1]!.delay).toBe(1000);

    scheduled[1]!.fn();
    sockets[2]!.serverClose();
    expect(scheduled[2]!.delay).toBe(2000);

    // Successful connection resets the backoff.
    scheduled[2]!.fn();
    sockets[3]!.serverOpen();
    sockets[3]!.serverClose();
    expect(scheduled[3]!.delay).toBe(500);
  });

  it("a server 'closed' message ends the feed without reconnecting", () => {
    const { feed, sockets, scheduled, messages } = harness();
    feed.connect();
    sockets[0]!.serverOpen();
    sockets[0]!.serverSend({ type: "closed", dropped: 0 });
    sockets[0]!.serverClose();
    expect(messages).toEqual([{ type: "closed", dropped: 0 }]);
    expect(scheduled).toHaveLength(0);
  });

  it("close() cancels reconnects", () => {
    const { feed, sockets, scheduled } = harness();
    feed.connect();
    sockets[0]!.serverClose();
    expect(scheduled).toHaveLength(1);
    feed.close();
    scheduled[0]!.fn(); // stale timer fires; no new socket
    expect(sockets).toHaveLength(1);
  });
});
