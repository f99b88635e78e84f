/** App entry: hash routing over the four views, one shared store. */

import { ApiClient } from "./api.js";
import { AppStore } from "./store.js";
import { ConsentView } from "./views/consent.js";
import { DashboardView } from "./views/dashboard.js";
import { SessionsView } from "./views/sessions.js";
import { TimelineView } from "./views/timeline_view.js";

interface View {
  mount(): Promise<void>;
  unmount(): void;
  render?(state: unknown): void;
}

function route(store: AppStore, outlet: HTMLElement): View {
  const hash = location.hash || "#/dashboard";
  const timelineMatch = /^#\/session\/([0-9a-f-]+)$/.exec(hash);
  if (timelineMatch) return new TimelineView(outlet, store, timelineMatch[1]!);
  if (hash.startsWith("#/sessions")) return new SessionsView(outlet, store);
  if (hash.startsWith("#/consent")) return new ConsentView(outlet, store);
  return new DashboardView(outlet, store);
}

export function boot(): void {
  const api = new ApiClient("");
  const store = new AppStore(api);
  const outlet = document.getElementById("outlet")!;
  let current: View | null = null;
  let unsubscribe: (() => void) | null = null;

  const navigate = () => {
    current?.unmount();
    unsubscribe?.();
    const view = route(store, outlet);
    current = view;
    if (view instanceof DashboardView || view instanceof SessionsView || view instanceof ConsentView) {
      unsubscribe = store.subscribe((state) => view.render(state as never));
    } else {
      unsubscribe = null;
    }
    void view.mount();
    document.querySelectorAll("nav a").forEach((a) => {
      a.classList.toggle("active", a.getAttribute("href") === (location.hash || "#/dashboard"));
    });
  };

  window.addEventListener("hashchange", navigate);
  void store.checkHealth().then(() => navigate());
  setInterval(() => void store.checkHealth(), 5000);
}

if (typeof document !== "undefined" && document.getElementById("outlet")) {
  boot();
}
