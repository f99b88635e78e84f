/** Playback timeline: per-stream tracks over a scrubbable window. */

import { escapeHtml, fmtDuration, shortId } from "../format.js";
import type { AppStore } from "../store.js";
import { TimelineController, type Tracks } from "../timeline.js";

function sparkline(points: { t_ms: number; value: number }[], fromMs: number, toMs: number, lo: number, hi: number): string {
  if (!points.length) return `<div class="track empty">no samples</div>`;
  const width = 800;
  const height = 48;
  const span = Math.max(1, toMs - fromMs);
  const path = points
    .map((p, i) => {
      const x = ((p.t_ms - fromMs) / span) * width;
      const y = height - ((p.value - lo) / Math.max(1e-9, hi - lo)) * height;
      return `${i === 0 ? "M" : "L"}${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
  return `<svg class="track spark" viewBox="0 0 ${width} ${height}" preserveAspectRatio="none"><path d="${path}" /></svg>`;
}

export class TimelineViewState {
  constructor(public controller: TimelineController) {}
}

export class TimelineView {
  private controller: TimelineController | null = null;

  constructor(
    private root: HTMLElement,
    private store: AppStore,
    private sessionId: string,
  ) {}

  async mount(): Promise<void> {
    const session = await this.store.api.getSession(this.sessionId);
    this.controller = new TimelineController(this.store.api, this.sessionId, session.duration_ms);
    const tracks = await this.controller.scrubTo(0);
    this.render(tracks);
  }

  unmount(): void {}

  private positionPercent(t_ms: number): number {
    const { from_ms, to_ms } = this.controller!.window;
    return ((t_ms - from_ms) / Math.max(1, to_ms - from_ms)) * 100;
  }

  render(tracks: Tracks): void {
    const controller = this.controller!;
    const { from_ms, to_ms } = controller.window;
    const thumbs = tracks.frames
      .map(
        (frame) => `
        <figure class="thumb" style="left:${this.positionPercent(frame.t_ms)}%">
          <img src="${this.store.api.mediaUrl(this.sessionId, frame.media)}"
               alt="frame ${frame.seq}" title="t=${frame.t_ms}ms, ${frame.blurred_regions.length} redacted region(s)" />
        </figure>`,
      )
      .join("");
    const desMarkers = tracks.des
      .map(
        (marker) => `
        <button class="marker ${marker.terminated ? "" : "open"}" style="left:${this.positionPercent(marker.t_ms)}%"
                data-role="des-marker" title="${escapeHtml(marker.text || "(empty report)")}">
          ◆
        </button>`,
      )
      .join("");
    const transcripts = tracks.transcripts
      .map(
        (entry) => `
        <span class="utterance ${entry.speaker}" style="left:${this.positionPercent(entry.t_ms)}%"
              title="${escapeHtml(entry.text)}">${entry.speaker === "wearer" ? "●" : "○"}</span>`,
      )
      .join("");

    this.root.innerHTML = `
      <section class="panel">
        <h2>session ${shortId(this.sessionId)} <span class="muted">(${fmtDuration(controller.durationMs)})</span></h2>
        <form data-role="scrub-form" class="scrub">
          <label>from (s)
            <input name="from" type="number" min="0" step="1" value="${from_ms / 1000}" />
          </label>
          <label>to (s)
            <input name="to" type="number" min="0" step="1" value="${to_ms / 1000}" />
          </label>
          <input name="slider" data-role="scrub-slider" type="range" min="0"
                 max="${Math.max(0, controller.durationMs - controller.windowMs) / 1000}"
                 step="1" value="${from_ms / 1000}" />
          <button type="submit">load window</button>
          ${controller.loading ? `<span class="muted">loading…</span>` : ""}
        </form>
        <div class="tracks">
          <h3>frames <span class="muted">(${tracks.frames.length})</span></h3>
          <div class="track frames">${thumbs || `<div class="empty">no frames in window</div>`}</div>
          <h3>experience reports <span class="muted">(${tracks.des.length})</span></h3>
          <div class="track markers">${desMarkers || `<div class="empty">none</div>`}</div>
          <h3>transcripts <span class="muted">(● wearer / ○ other)</span></h3>
          <div class="track markers">${transcripts || `<div class="empty">none</div>`}</div>
          <h3>gsr</h3>
          ${sparkline(tracks.gsr, from_ms, to_ms, 0, 30)}
          <h3>stress</h3>
          ${sparkline(tracks.cognition["stress"] ?? [], from_ms, to_ms, 0, 1)}
        </div>
      </section>`;
    this.bind();
  }

  private bind(): void {
    const form = this.root.querySelector<HTMLFormElement>('[data-role="scrub-form"]');
    form?.addEventListener("submit", (event) => {
      event.preventDefault();
      const data = new FormData(form);
      void this.scrub(Number(data.get("from")) * 1000, Number(data.get("to")) * 1000);
    });
    const slider = this.root.querySelector<HTMLInputElement>('[data-role="scrub-slider"]');
    slider?.addEventListener("change", () => {
      const fromMs = Number(slider.value) * 1000;
      void this.scrub(fromMs, fromMs + this.controller!.windowMs);
    });
  }

  async scrub(fromMs: number, toMs: number): Promise<void> {
    const tracks = await this.controller!.scrubTo(fromMs, toMs);
    this.render(tracks);
  }
}
