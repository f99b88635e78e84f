/** Session browser: list, verify, open in the timeline. */

import { escapeHtml, fmtBytes, fmtDuration, shortId } from "../format.js";
import type { AppStore, State } from "../store.js";

export class SessionsView {
  constructor(
    private root: HTMLElement,
    private store: AppStore,
  ) {}

  async mount(): Promise<void> {
    await this.store.refreshSessions();
    this.render(this.store.get());
  }

  unmount(): void {}

  render(state: State): void {
    const rows = state.sessions
      .map((session) => {
        const verdict = state.verifyResults[session.session_id];
        const verdictBadge = verdict
          ? `<span class="badge ${verdict.kind}">${escapeHtml(verdict.verdict)}</span>`
          : "";
        const bytes = session.segments.reduce((sum, s) => sum + s.byte_len, 0);
        return `
        <tr data-session="${session.session_id}">
          <td><a href="#/session/${session.session_id}">${shortId(session.session_id)}</a></td>
          <td>${escapeHtml(session.subject_id)}</td>
          <td>${escapeHtml(session.started_at)}</td>
          <td><span class="badge ${session.status}">${session.status}</span></td>
          <td>${fmtDuration(session.duration_ms)}</td>
          <td>${session.segment_count} (${fmtBytes(bytes)})</td>
          <td>${session.attested_count}/${session.segment_count}</td>
          <td>${session.quarantined_count}</td>
          <td><button data-role="verify" data-session="${session.session_id}">verify</button> ${verdictBadge}</td>
        </tr>`;
      })
      .join("");
    this.root.innerHTML = `
      <section class="panel">
        <h2>sessions</h2>
        ${state.sessions.length === 0 ? `<p class="muted">no recordings yet</p>` : ""}
        <table class="sessions">
          <thead><tr>
            <th>id</th><th>subject</th><th>started</th><th>status</th><th>duration</th>
            <th>segments</th><th>attested</th><th>quarantined</th><th>chain</th>
          </tr></thead>
          <tbody>${rows}</tbody>
        </table>
      </section>`;
    this.root.querySelectorAll<HTMLButtonElement>('[data-role="verify"]').forEach((button) => {
      button.addEventListener("click", () => {
        void this.store.verifySession(button.dataset["session"]!);
      });
    });
  }
}
