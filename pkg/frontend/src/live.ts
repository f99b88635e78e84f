/** Live WebSocket feed with exponential-backoff reconnect.
 *
 * Reconnects after unexpected closes (network blips, service restarts) with
 * doubling delays capped at 10 s; a deliberate close() or a server "closed"
 * message ends the feed for good.
 */

import type { LiveMessage } from "./types.js";

const BASE_DELAY_MS = 500;
const MAX_DELAY_MS = 10_000;

export class LiveFeed {
  private socket: WebSocket | null = null;
  private attempts = 0;
  private stopped = false;
  private finished = false;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private open: () => WebSocket,
    private onMessage: (message: LiveMessage) => void,
    private onStatus: (connected: boolean) => void = () => {},
    private schedule: (fn: () => void, delayMs: number) => ReturnType<typeof setTimeout> = (fn, d) =>
      setTimeout(fn, d),
  ) {}

  reconnectDelay(): number {
    return Math.min(BASE_DELAY_MS * 2 ** this.attempts, MAX_DELAY_MS);
  }

  connect(): void {
    if (this.stopped || this.finished) return;
    let socket: WebSocket;
    try {
      socket = this.open();
    } catch {
      this.scheduleReconnect();
      return;
    }
    this.socket = socket;
    socket.onopen = () => {
      this.attempts = 0;
      this.onStatus(true);
    };
    socket.onmessage = (event: MessageEvent) => {
      let message: LiveMessage;
      try {
        message = JSON.parse(String(event.data)) as LiveMessage;
      } catch {
        return;
      }
      if (message.type === "closed") {
        this.finished = true;
      }
      this.onMessage(message);
    };
    socket.onclose = () => {
      this.onStatus(false);
      this.socket = null;
      if (!this.stopped && !this.finished) this.scheduleReconnect();
    };
    socket.onerror = () => {
      /* onclose follows */
    };
  }

  private scheduleReconnect(): void {
    const delay = this.reconnectDelay();
    this.attempts += 1;
    this.timer = this.schedule(() => this.connect(), delay);
  }

  close(): void {
    this.stopped = true;
    if (this.timer !== null) clearTimeout(this.timer);
    this.socket?.close();
    this.socket = null;
    this.onStatus(false);
  }
}
