/**
 * Dashboard wiring: load a workspace, train the sample model, fetch the
 * base forecast, and re-run the edited scenario after every what-if action.
 *
 * All state lives in one App object; every edit triggers a fresh pair of
 * service calls (base request is cached, edited is recomputed), and an
 * in-flight refresh is superseded by the next one (last write wins).
 */

import { ApiClient, ApiError } from "./api";
import { renderForecastChart } from "./chart";
import { diffForecasts, isZeroDiff } from "./diff";
import { applyEdits, newDraft, pushEdit, clearEdits, type ScenarioDraft } from "./scenario";
import { renderAtRiskTable, renderDiffTable, formatMoney } from "./table";
import type { ForecastResult } from "./types";
import { loadSampleWorkspace, toForecastRequest, type Workspace } from "./workspace";

interface AppElements {
  baseChart: HTMLElement;
  editedChart: HTMLElement;
  atRiskTable: HTMLElement;
  diffTable: HTMLElement;
  insights: HTMLElement;
  status: HTMLElement;
  errors: HTMLElement;
}

export class App {
  private draft: ScenarioDraft;
  private baseResult: ForecastResult | null = null;
  private refreshSeq = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly workspace: Workspace,
    private readonly el: AppElements,
  ) {
    this.draft = newDraft(toForecastRequest(workspace, true));
  }

  static async bootSample(api: ApiClient, el: AppElements): Promise<App> {
    const workspace = loadSampleWorkspace();
    const app = new App(api, workspace, el);
    app.renderRowErrors();
    await api.train(workspace.businessId, workspace.history);
    await app.refresh();
    return app;
  }

  async addPlannedItem(id: string, amount: number, month: string): Promise<void> {
    this.draft = pushEdit(this.draft, {
      kind: "add_planned_item",
      item: { id, amount, month },
    });
    await this.refresh();
  }

  async markInvoicePaid(invoiceId: string): Promise<void> {
    this.draft = pushEdit(this.draft, { kind: "mark_invoice_paid", invoiceId });
    await this.refresh();
  }

  async toggleIntegrateAr(): Promise<void> {
    this.draft = pushEdit(this.draft, { kind: "toggle_integrate_ar" });
    await this.refresh();
  }

  async resetEdits(): Promise<void> {
    this.draft = clearEdits(this.draft);
    await this.refresh();
  }

  /** Latest-wins: an older refresh that resolves after a newer one started
   * must not clobber the newer render. */
  async refresh(): Promise<void> {
    const seq = ++this.refreshSeq;
    this.el.status.textContent = "loading…";
    try {
      if (this.baseResult === null) {
        this.baseResult = await this.api.forecast(this.draft.base);
      }
      const editedRequest = applyEdits(this.draft);
      const edited = await this.api.forecast(editedRequest);
      if (seq !== this.refreshSeq) return;
      this.render(this.baseResult, edited);
      this.el.status.textContent = "";
    } catch (err) {
      if (seq !== this.refreshSeq) return;
      this.renderError(err);
    }
  }

  private render(base: ForecastResult, edited: ForecastResult): void {
    const horizon = this.workspace.horizon;
    renderForecastChart(this.el.baseChart, base, horizon);
    renderForecastChart(this.el.editedChart, edited, horizon);
    renderAtRiskTable(this.el.atRiskTable, edited, this.workspace.openInvoices);

    const diff = diffForecasts(base, edited, horizon);
    renderDiffTable(this.el.diffTable, diff.perModule);

    this.el.insights.replaceChildren();
    const lines = [...edited.insights, ...edited.warnings.map((w) => `⚠ ${w}`)];
    if (!isZeroDiff(diff)) {
      lines.push(`scenario changes the quarter by ${formatMoney(diff.aggregateDelta)}`);
    }
    for (const line of lines) {
      const li = document.createElement("li");
      li.textContent = line;
      this.el.insights.appendChild(li);
    }
  }

  private renderError(err: unknown): void {
    const message =
      err instanceof ApiError
        ? `service error ${err.errorCode}: ${JSON.stringify(err.detail)}`
        : `unexpected error: ${String(err)}`;
    this.el.status.textContent = "";
    this.el.errors.replaceChildren();
    const box = document.createElement("div");
    box.className = "error-box";
    box.textContent = message;
    const retry = document.createElement("button");
    retry.textContent = "Retry";
    retry.addEventListener("click", () => void this.refresh());
    box.appendChild(retry);
    this.el.errors.appendChild(box);
  }

  private renderRowErrors(): void {
    this.el.errors.replaceChildren();
    for (const err of this.workspace.rowErrors) {
      const line = document.createElement("div");
      line.className = "row-error";
      line.textContent = `row ${err.row}: ${err.message}`;
      this.el.errors.appendChild(line);
    }
  }
}

function requireElement(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el;
}

export function collectElements(): AppElements {
  return {
    baseChart: requireElement("base-chart"),
    editedChart: requireElement("edited-chart"),
    atRiskTable: requireElement("at-risk"),
    diffTable: requireElement("diff"),
    insights: requireElement("insights"),
    status: requireElement("status"),
    errors: requireElement("errors"),
  };
}

export async function boot(baseUrl: string): Promise<App> {
  const api = new ApiClient(baseUrl);
  const el = collectElements();
  const app = await App.bootSample(api, el);

  const form = document.getElementById("planned-form") as HTMLFormElement | null;
  form?.addEventListener("submit", (event) => {
    event.preventDefault();
    const data = new FormData(form);
    void app.addPlannedItem(
      String(data.get("id") || `planned-${Date.now()}`),
      Number(data.get("amount")),
      String(data.get("month")),
    );
  });
  document.getElementById("toggle-ar")?.addEventListener("click", () => {
    void app.toggleIntegrateAr();
  });
  document.getElementById("reset")?.addEventListener("click", () => {
    void app.resetEdits();
  });
  return app;
}

declare global {
  interface Window {
    SMECAST_API_URL?: string;
  }
}

if (typeof document !== "undefined" && document.getElementById("base-chart")) {
  void boot(window.SMECAST_API_URL ?? "http://127.0.0.1:8000");
}
