// @vitest-environment happy-dom
/** DOM-level dashboard checks: gauges render live values, the drop counter
 * is visible, and a dead backend disables the controls. */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { AppStore } from "../src/store.js";
import { DashboardView } from "../src/views/dashboard.js";
import { cognitionSample, MockBackend } from "./mock_backend.js";

function mount(backend: MockBackend) {
  const api = new ApiClient("", backend.fetch, backend.wsFactory);
  const store = new AppStore(api);
  const root = document.createElement("main");
  document.body.appendChild(root);
  const view = new DashboardView(root, store);
  return { store, root, view };
}

describe("dashboard DOM", () => {
  it("renders gauge values from live samples", async () => {
    const backend = new MockBackend();
    const { store, root, view } = mount(backend);
    await view.mount();
    await store.startSession({});
    backend.lastSocket().serverOpen();
    backend.lastSocket().serverSend({ type: "sample", envelope: cognitionSample(100, 0, 0.9) });
    view.render(store.get());

    const stress = root.querySelector('[data-gauge-value="stress"]');
    expect(stress?.textContent).toBe("90%");
    const fill = root.querySelector('[data-gauge="stress"] .gauge-fill') as HTMLElement;
    expect(fill.style.width).toBe("90%");
    view.unmount();
  });

  it("shows the drop counter", async () => {
    const backend = new MockBackend();
    const { store, root, view } = mount(backend);
    await view.mount();
    await store.startSession({});
    backend.lastSocket().serverOpen();
    backend.lastSocket().serverSend({ type: "drops", count: 12 });
    view.render(store.get());
    expect(root.querySelector('[data-role="drop-counter"]')?.textContent).toContain("12");
    view.unmount();
  });

  it("disables controls when the backend is down", async () => {
    const backend = new MockBackend();
    const { store, root, view } = mount(backend);
    await view.mount();
    backend.healthy = false;
    await store.checkHealth();
    view.render(store.get());
    expect(root.querySelector('[data-role="backend-down"]')).not.toBeNull();
    const start = root.querySelector('[data-role="start"]') as HTMLButtonElement;
    expect(start.disabled).toBe(true);
    view.unmount();
  });

  it("client-side schema validation blocks bad config", async () => {
    const backend = new MockBackend();
    const { view } = mount(backend);
    await view.mount();
    const issues = view.configIssues("{not json");
    expect(issues.length).toBeGreaterThan(0);
    expect(view.configIssues("{}")).toEqual([]);
    view.unmount();
  });
});
