/**
 * At-risk invoice table and the per-module diff table. Both render
 * service-provided numbers verbatim (formatting only).
 */

import type { ModuleDelta } from "./diff";
import type { DelayPrediction, ForecastResult, InvoiceRecord } from "./types";

export function formatMoney(minorUnits: number): string {
  const sign = minorUnits < 0 ? "-" : "";
  const abs = Math.abs(minorUnits);
  const major = Math.floor(abs / 100);
  const minor = String(abs % 100).padStart(2, "0");
  return `${sign}${major.toLocaleString("en-US")}.${minor}`;
}

function addDays(isoDate: string, days: number): string {
  const d = new Date(`${isoDate}T00:00:00Z`);
  d.setUTCDate(d.getUTCDate() + days);
  return d.toISOString().slice(0, 10);
}

export function renderAtRiskTable(
  container: HTMLElement,
  result: ForecastResult,
  openInvoices: InvoiceRecord[],
): HTMLTableElement {
  container.replaceChildren();
  const table = document.createElement("table");
  table.className = "at-risk-table";

  const head = table.createTHead().insertRow();
  for (const label of ["Invoice", "Customer", "Amount", "Due", "Expected payment", "Trend"]) {
    const th = document.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }

  const body = table.createTBody();
  const byId = new Map(openInvoices.map((inv) => [inv.invoice_id, inv]));
  for (const pred of result.at_risk_invoices) {
    const invoice = pred.invoice_id ? byId.get(pred.invoice_id) : undefined;
    body.appendChild(atRiskRow(pred, invoice));
  }

  if (result.at_risk_invoices.length === 0) {
    const row = body.insertRow();
    row.className = "empty-state";
    const cell = row.insertCell();
    cell.colSpan = 6;
    cell.textContent = "No invoices at risk.";
  }

  container.appendChild(table);
  return table;
}

function atRiskRow(pred: DelayPrediction, invoice?: InvoiceRecord): HTMLTableRowElement {
  const row = document.createElement("tr");
  row.className = "at-risk-row";
  row.dataset.invoiceId = pred.invoice_id ?? "";

  const cells = [
    pred.invoice_id ?? "?",
    invoice?.customer_id ?? "?",
    invoice ? formatMoney(invoice.amount) : "?",
    invoice?.due_date ?? "?",
    invoice ? addDays(invoice.due_date, pred.expected_delay_days) : `+${pred.expected_delay_days}d`,
  ];
  for (const text of cells) {
    const td = row.insertCell();
    td.textContent = text;
  }

  const badgeCell = row.insertCell();
  const badge = document.createElement("span");
  badge.className = `insight-badge insight-${pred.insight}`;
  badge.textContent = pred.insight;
  badgeCell.appendChild(badge);
  return row;
}

export function renderDiffTable(
  container: HTMLElement,
  deltas: ModuleDelta[],
): HTMLTableElement {
  container.replaceChildren();
  const table = document.createElement("table");
  table.className = "diff-table";

  const head = table.createTHead().insertRow();
  for (const label of ["Source", "Base", "Edited", "Δ"]) {
    const th = document.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }

  const body = table.createTBody();
  for (const m of deltas) {
    const row = body.insertRow();
    row.dataset.source = m.source;
    row.insertCell().textContent = m.source;
    row.insertCell().textContent = formatMoney(m.baseTotal);
    row.insertCell().textContent = formatMoney(m.editedTotal);
    const deltaCell = row.insertCell();
    deltaCell.textContent = (m.delta > 0 ? "+" : "") + formatMoney(m.delta);
    deltaCell.className = m.delta === 0 ? "delta-zero" : m.delta > 0 ? "delta-up" : "delta-down";
  }

  container.appendChild(table);
  return table;
}
