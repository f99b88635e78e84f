/** Consent registry manager: who may appear unblurred, and for whom. */

import { escapeHtml } from "../format.js";
import type { AppStore, State } from "../store.js";

export class ConsentView {
  constructor(
    private root: HTMLElement,
    private store: AppStore,
  ) {}

  async mount(): Promise<void> {
    await this.store.refreshConsent();
    this.render(this.store.get());
  }

  unmount(): void {}

  render(state: State): void {
    const rows = state.consent
      .map(
        (record) => `
        <tr>
          <td>${escapeHtml(record.person_id)}</td>
          <td><code>${escapeHtml(record.face_signature)}</code></td>
          <td>${record.scope_global ? `<span class="badge valid">global</span>` : escapeHtml(record.granted_to.join(", ") || "(nobody)")}</td>
          <td><button data-role="remove" data-person="${escapeHtml(record.person_id)}">revoke</button></td>
        </tr>`,
      )
      .join("");
    this.root.innerHTML = `
      <section class="panel">
        <h2>consent registry</h2>
        <p class="muted">Faces without a matching record are always pixelated. Revoking consent
        affects new recordings; stored frames are never retroactively unblurred or re-blurred.</p>
        <table>
          <thead><tr><th>person</th><th>face signature</th><th>scope</th><th></th></tr></thead>
          <tbody>${rows}</tbody>
        </table>
        <form data-role="add-form" class="consent-form">
          <label>person id <input name="person_id" required /></label>
          <label>face signature <input name="face_signature" placeholder="sig:person" required /></label>
          <label><input name="scope_global" type="checkbox" /> global consent</label>
          <label>granted to (comma-separated subject ids)
            <input name="granted_to" placeholder="anon-subject" /></label>
          <button type="submit">add consent</button>
        </form>
        ${state.lastError ? `<div class="banner warn">${escapeHtml(state.lastError)}</div>` : ""}
      </section>`;
    this.bind();
  }

  private bind(): void {
    this.root.querySelectorAll<HTMLButtonElement>('[data-role="remove"]').forEach((button) => {
      button.addEventListener("click", () => {
        void this.store.removeConsent(button.dataset["person"]!).then(() => this.render(this.store.get()));
      });
    });
    const form = this.root.querySelector<HTMLFormElement>('[data-role="add-form"]');
    form?.addEventListener("submit", (event) => {
      event.preventDefault();
      const data = new FormData(form);
      const granted = String(data.get("granted_to") || "")
        .split(",")
        .map((s) => s.trim())
        .filter(Boolean);
      void this.store
        .addConsent({
          person_id: String(data.get("person_id")),
          face_signature: String(data.get("face_signature")),
          scope_global: data.get("scope_global") === "on",
          granted_to: granted,
        })
        .then(() => this.render(this.store.get()));
    });
  }
}
