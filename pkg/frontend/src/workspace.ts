/**
 * Workspace loading: either the bundled sample dataset or user-supplied
 * CSV/JSON files. Client-side parsing is structural only (the service owns
 * semantic validation and returns row-indexed diagnostics); rows that don't
 * even parse are reported inline with their row number.
 */

import Papa from "papaparse";

import {
  SAMPLE_BUSINESS_ID,
  SAMPLE_HISTORY_WINDOW,
  SAMPLE_HORIZON,
  SAMPLE_INVOICES_CSV,
  SAMPLE_LEDGER,
  SAMPLE_OPEN_INVOICES_CSV,
} from "./sampleData";
import type { DateWindow, ForecastRequest, InvoiceRecord, Ledger } from "./types";

export interface RowError {
  row: number;
  message: string;
}

export interface ParsedInvoices {
  invoices: InvoiceRecord[];
  errors: RowError[];
}

const REQUIRED_COLUMNS = ["invoice_id", "customer_id", "amount", "issue_date", "due_date"];
const ISO_DATE = /^\d{4}-\d{2}-\d{2}$/;

export function parseInvoicesCsv(text: string): ParsedInvoices {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });

  const invoices: InvoiceRecord[] = [];
  const errors: RowError[] = parsed.errors.map((e) => ({
    row: e.row ?? -1,
    message: e.message,
  }));

  parsed.data.forEach((raw, row) => {
    const missing = REQUIRED_COLUMNS.filter((c) => !raw[c]);
    if (missing.length > 0) {
      errors.push({ row, message: `missing ${missing.join(", ")}` });
      return;
    }
    const amount = Number(raw.amount);
    if (!Number.isInteger(amount)) {
      errors.push({ row, message: `amount is not an integer: ${raw.amount}` });
      return;
    }
    const badDate = ["issue_date", "due_date"].find((c) => !ISO_DATE.test(raw[c]));
    if (badDate) {
      errors.push({ row, message: `malformed ${badDate}: ${raw[badDate]}` });
      return;
    }
    if (raw.payment_date && !ISO_DATE.test(raw.payment_date)) {
      errors.push({ row, message: `malformed payment_date: ${raw.payment_date}` });
      return;
    }
    invoices.push({
      invoice_id: raw.invoice_id,
      customer_id: raw.customer_id,
      amount,
      issue_date: raw.issue_date,
      due_date: raw.due_date,
      payment_date: raw.payment_date || null,
    });
  });

  return { invoices, errors };
}

export interface Workspace {
  businessId: string;
  ledger: Ledger;
  history: InvoiceRecord[];
  openInvoices: InvoiceRecord[];
  historyWindow: DateWindow;
  horizon: DateWindow;
  rowErrors: RowError[];
}

export function loadSampleWorkspace(): Workspace {
  const history = parseInvoicesCsv(SAMPLE_INVOICES_CSV);
  const open = parseInvoicesCsv(SAMPLE_OPEN_INVOICES_CSV);
  return {
    businessId: SAMPLE_BUSINESS_ID,
    ledger: SAMPLE_LEDGER,
    history: history.invoices,
    openInvoices: open.invoices,
    historyWindow: SAMPLE_HISTORY_WINDOW,
    horizon: SAMPLE_HORIZON,
    rowErrors: [...history.errors, ...open.errors],
  };
}

export function toForecastRequest(ws: Workspace, integrateAr: boolean): ForecastRequest {
  return {
    business_id: ws.businessId,
    ledger: ws.ledger,
    history_window: ws.historyWindow,
    horizon: ws.horizon,
    open_invoices: ws.openInvoices,
    history: ws.history,
    integrate_ar: integrateAr,
  };
}
