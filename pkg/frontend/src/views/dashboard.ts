/** Live control view: start/stop, cognition gauges, GSR, frame preview,
 * attestation indicator, drop counter. */

import { frameMedia } from "../api.js";
import { escapeHtml, fmtPercent, shortId } from "../format.js";
import type { AppStore, State } from "../store.js";
import { COGNITION_KEYS } from "../types.js";
import { validateAgainstSchema } from "../validate.js";

export class DashboardView {
  private configSchema: Record<string, unknown> | null = null;
  private pollTimer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private root: HTMLElement,
    private store: AppStore,
  ) {}

  async mount(): Promise<void> {
    try {
      this.configSchema = await this.store.api.getSchema("session-config.schema.json");
    } catch {
      this.configSchema = null;
    }
    await this.store.loadConfigDefaults();
    this.render(this.store.get());
    this.pollTimer = setInterval(() => void this.pollActive(), 1000);
  }

  unmount(): void {
    if (this.pollTimer) clearInterval(this.pollTimer);
  }

  private async pollActive(): Promise<void> {
    const { live } = this.store.get();
    if (live.sessionId && !live.closed) {
      await this.store.refreshSessions();
    }
  }

  render(state: State): void {
    const live = state.live;
    const active = state.sessions.find((s) => s.session_id === live.sessionId);
    const attestation = active
      ? `${active.attested_count}/${active.segment_count} segments attested`
      : "no segments yet";
    const gaugeRows = COGNITION_KEYS.map((key) => {
      const value = live.gauges?.[key] ?? null;
      const width = value === null ? 0 : Math.round(value * 100);
      const label = value === null ? "-" : fmtPercent(value);
      return `
        <div class="gauge" data-gauge="${key}">
          <span class="gauge-label">${key}</span>
          <div class="gauge-bar"><div class="gauge-fill" style="width:${width}%"></div></div>
          <span class="gauge-value" data-gauge-value="${key}">${label}</span>
        </div>`;
    }).join("");

    const frame = live.lastFrame;
    const media = frame ? frameMedia(frame) : null;
    const preview =
      frame && media && live.sessionId
        ? `<img class="frame-preview" alt="latest redacted frame"
             src="${this.store.api.mediaUrl(live.sessionId, media)}" />`
        : `<div class="frame-preview placeholder">no frame yet</div>`;

    this.root.innerHTML = `
      ${state.backendUp ? "" : `<div class="banner error" data-role="backend-down">backend unreachable — controls disabled</div>`}
      ${state.lastError ? `<div class="banner warn">${escapeHtml(state.lastError)}</div>` : ""}
      <section class="panel">
        <h2>record</h2>
        <form data-role="start-form">
          <label>duration (s) <input name="duration" type="number" min="1" value="60" /></label>
          <label>seed <input name="seed" type="number" min="0" value="0" /></label>
          <label><input name="realtime" type="checkbox" /> real-time clock</label>
          <details>
            <summary>config overrides (JSON)</summary>
            <textarea name="config" rows="6" spellcheck="false">{}</textarea>
            <div class="schema-errors" data-role="schema-errors"></div>
          </details>
          <button type="submit" ${state.backendUp ? "" : "disabled"} data-role="start">start session</button>
          <button type="button" ${live.sessionId && !live.closed ? "" : "disabled"} data-role="stop">stop</button>
        </form>
      </section>
      <section class="panel">
        <h2>live ${live.sessionId ? `· ${shortId(live.sessionId)}` : ""}</h2>
        <div class="live-meta">
          <span data-role="ws-status" class="${live.connected ? "ok" : "off"}">${live.connected ? "live" : live.closed ? "ended" : "connecting"}</span>
          <span data-role="drop-counter">dropped: ${live.dropped}</span>
          <span data-role="attestation">${attestation}</span>
          <span data-role="gsr">GSR: ${live.gsrUs === null ? "-" : `${live.gsrUs.toFixed(2)} µS`}</span>
        </div>
        <div class="gauges" data-role="gauges">${gaugeRows}</div>
        ${preview}
      </section>
    `;
    this.bind();
  }

  private bind(): void {
    const form = this.root.querySelector<HTMLFormElement>('[data-role="start-form"]');
    form?.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.onStart(form);
    });
    this.root
      .querySelector('[data-role="stop"]')
      ?.addEventListener("click", () => void this.onStop());
  }

  configIssues(raw: string): string[] {
    let parsed: unknown;
    try {
      parsed = JSON.parse(raw || "{}");
    } catch (error) {
      return [`config is not valid JSON: ${String(error)}`];
    }
    if (!this.configSchema) return [];
    const merged = { ...(this.store.get().configDefaults ?? {}), ...(parsed as object) };
    return validateAgainstSchema(merged, this.configSchema).map((i) => `${i.path}: ${i.message}`);
  }

  private async onStart(form: HTMLFormElement): Promise<void> {
    const data = new FormData(form);
    const raw = String(data.get("config") || "{}");
    const issues = this.configIssues(raw);
    const errorBox = this.root.querySelector('[data-role="schema-errors"]');
    if (issues.length) {
      if (errorBox) errorBox.innerHTML = issues.map((i) => `<div>${escapeHtml(i)}</div>`).join("");
      return;
    }
    const config = JSON.parse(raw || "{}") as Record<string, unknown>;
    await this.store.startSession({
      config: Object.keys(config).length ? config : undefined,
      duration_ms: Number(data.get("duration") || 60) * 1000,
      seed: Number(data.get("seed") || 0),
      realtime: data.get("realtime") === "on",
    });
    this.render(this.store.get());
  }

  private async onStop(): Promise<void> {
    const sessionId = this.store.get().live.sessionId;
    if (sessionId) await this.store.stopSession(sessionId);
  }
}
