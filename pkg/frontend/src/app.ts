// Single-page wiring: start form, 1 s polling while the engine computes,
// answer/skip/abort controls.  One mutation in flight at a time.

import { ApiClient, ApiError, Snapshot } from "./api.js";
import { diagnosisLabel, renderSession } from "./view.js";

const POLL_MS = 1000;

export class SessionPage {
  private snapshot: Snapshot | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private busy = false;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
    private sessionId: string,
  ) {}

  async start(): Promise<void> {
    await this.refresh();
  }

  stop(): void {
    if (this.timer) clearTimeout(this.timer);
  }

  private async refresh(): Promise<void> {
    this.snapshot = await this.api.getSession(this.sessionId);
    this.render();
    if (this.snapshot.status === "computing") {
      this.timer = setTimeout(() => void this.refresh(), POLL_MS);
    }
  }

  private render(): void {
    if (!this.snapshot) return;
    this.root.innerHTML = renderSession(this.snapshot);
    for (const button of this.root.querySelectorAll<HTMLButtonElement>("button[data-answer]")) {
      button.addEventListener("click", () => void this.onAnswer(button.dataset.answer!));
    }
  }

  private async onAnswer(kind: string): Promise<void> {
    if (this.busy || !this.snapshot) return;
    this.busy = true;
    try {
      if (kind === "abort") {
        this.renderAbort();
        await this.api.deleteSession(this.sessionId);
        return;
      }
      const value = kind === "skip" ? ("skip" as const) : kind === "yes";
      this.snapshot = await this.api.answer(this.sessionId, value);
      this.render();
      if (this.snapshot.status === "computing") {
        this.timer = setTimeout(() => void this.refresh(), POLL_MS);
      }
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        await this.refresh(); // stale view; fetch the fresh state
      } else {
        throw err;
      }
    } finally {
      this.busy = false;
    }
  }

  private renderAbort(): void {
    const best = (this.snapshot?.leading ?? [])
      .slice()
      .sort((a, b) => b.probability - a.probability)[0];
    const label = best ? diagnosisLabel(best.ids) : "(none)";
    this.root.innerHTML =
      `<div class="solution"><h2>Aborted</h2>` +
      `<p>current best candidate: <b>${label}</b></p></div>`;
  }
}

function readParams(form: HTMLFormElement) {
  const data = new FormData(form);
  const text = (data.get("dpi") as string) ?? "";
  return {
    dpi: text,
    uniform: data.get("probs_text") ? false : true,
    element_probs: (data.get("probs_text") as string) || null,
    mode: (data.get("mode") as string) || "static",
    sigma: parseFloat((data.get("sigma") as string) || "0"),
    nmin: parseInt((data.get("nmin") as string) || "2", 10),
    nmax: parseInt((data.get("nmax") as string) || "2", 10),
  };
}

export function mountApp(document: Document, api: ApiClient): void {
  const form = document.getElementById("start-form") as HTMLFormElement;
  const errorBox = document.getElementById("start-error") as HTMLElement;
  const sessionRoot = document.getElementById("session") as HTMLElement;
  const fileInput = document.getElementById("dpi-file") as HTMLInputElement | null;

  fileInput?.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    const area = form.elements.namedItem("dpi") as HTMLTextAreaElement;
    area.value = await file.text();
  });

  let page: SessionPage | null = null;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    errorBox.textContent = "";
    try {
      const created = await api.createSession(readParams(form));
      page?.stop();
      page = new SessionPage(api, sessionRoot, created.id);
      await page.start();
    } catch (err) {
      errorBox.textContent = err instanceof ApiError ? err.detail : String(err);
    }
  });
}

declare global {
  interface Window {
    kbdebugMount?: () => void;
  }
}

if (typeof window !== "undefined" && typeof document !== "undefined") {
  window.kbdebugMount = () => mountApp(document, new ApiClient(""));
  if (document.readyState !== "loading") {
    window.kbdebugMount();
  } else {
    document.addEventListener("DOMContentLoaded", () => window.kbdebugMount!());
  }
}
