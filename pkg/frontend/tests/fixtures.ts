import type { ForecastResult, InvoiceRecord } from "../src/types";

export function fixtureResult(overrides: Partial<ForecastResult> = {}): ForecastResult {
  const recurring = [
    { date: "2023-07-01", amount: -90000, source: "recurring" as const, origin_id: "office-rent" },
    { date: "2023-08-01", amount: -90000, source: "recurring" as const, origin_id: "office-rent" },
    { date: "2023-09-01", amount: -90000, source: "recurring" as const, origin_id: "office-rent" },
  ];
  const nonrecurring = [
    { date: "2023-07-15", amount: 145000, source: "nonrecurring" as const, origin_id: null },
    { date: "2023-08-15", amount: 145000, source: "nonrecurring" as const, origin_id: null },
  ];
  return {
    aggregate: [...recurring, ...nonrecurring],
    per_module: {
      hourly: [],
      nonrecurring,
      flatrate: [],
      recurring,
    },
    at_risk_invoices: [],
    insights: [],
    warnings: [],
    ...overrides,
  };
}

export function openInvoice(id: string, customer: string): InvoiceRecord {
  return {
    invoice_id: id,
    customer_id: customer,
    amount: 90000,
    issue_date: "2023-06-26",
    due_date: "2023-07-10",
    payment_date: null,
  };
}
