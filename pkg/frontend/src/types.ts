/**
 * Wire types for the forecasting service's /v1 API, with zod schemas so a
 * malformed response fails loudly at the boundary instead of deep inside a
 * render function. The UI performs no forecasting math of its own — every
 * number it displays comes out of one of these payloads.
 */

import { z } from "zod";

export const CASHFLOW_SOURCES = [
  "hourly",
  "nonrecurring",
  "flatrate",
  "recurring",
] as const;

export type CashflowSource = (typeof CASHFLOW_SOURCES)[number];

export interface InvoiceRecord {
  invoice_id: string;
  customer_id: string;
  amount: number;
  issue_date: string;
  due_date: string;
  payment_date: string | null;
}

export interface PlannedItem {
  id: string;
  amount: number;
  month: string; // "YYYY-MM"
}

export interface RecurringItem {
  id: string;
  amount: number;
  period: "weekly" | "monthly";
  anchor_date: string;
  end_date: string | null;
}

export interface Ledger {
  hourly_projects: Array<{
    id: string;
    tasks: Array<{ task_id: string; hours: number; wage: number; session_date: string }>;
  }>;
  flat_projects: Array<{ id: string; fee: number; completion_date: string }>;
  recurring_items: RecurringItem[];
  planned_items: PlannedItem[];
}

export interface DateWindow {
  start_date: string;
  end_date: string;
}

/** Mirrors the service's forecast request body. */
export interface ForecastRequest {
  business_id?: string;
  ledger: Ledger;
  history_window: DateWindow;
  horizon: DateWindow;
  open_invoices: InvoiceRecord[];
  history: InvoiceRecord[];
  integrate_ar: boolean;
}

const entrySchema = z.object({
  date: z.string(),
  amount: z.number().int(),
  source: z.enum(CASHFLOW_SOURCES),
  origin_id: z.string().nullable(),
});

const predictionSchema = z.object({
  invoice_id: z.string().nullable(),
  label: z.enum(["on_time", "delayed"]),
  score: z.number(),
  expected_delay_days: z.number().int(),
  insight: z.enum(["improving", "stable", "deteriorating"]),
});

export const forecastResultSchema = z.object({
  aggregate: z.array(entrySchema),
  per_module: z.record(z.string(), z.array(entrySchema)),
  at_risk_invoices: z.array(predictionSchema),
  insights: z.array(z.string()),
  warnings: z.array(z.string()),
});

export type CashFlowEntry = z.infer<typeof entrySchema>;
export type DelayPrediction = z.infer<typeof predictionSchema>;
export type ForecastResult = z.infer<typeof forecastResultSchema>;

export const trainResponseSchema = z.object({
  model_id: z.string(),
  metadata: z.record(z.string(), z.unknown()),
});

export const errorBodySchema = z.object({
  error_code: z.string(),
  detail: z.unknown(),
});

export type ErrorBody = z.infer<typeof errorBodySchema>;

export function emptyLedger(): Ledger {
  return {
    hourly_projects: [],
    flat_projects: [],
    recurring_items: [],
    planned_items: [],
  };
}
