import { describe, expect, it } from "vitest";

import { loadSampleWorkspace, parseInvoicesCsv, toForecastRequest } from "../src/workspace";

describe("invoice CSV parsing", () => {
  it("parses well-formed rows", () => {
    const { invoices, errors } = parseInvoicesCsv(
      "invoice_id,customer_id,amount,issue_date,due_date,payment_date\n" +
        "I1,acme,70000,2023-01-02,2023-01-16,2023-01-16\n" +
        "I2,acme,70000,2023-02-01,2023-02-15,\n",
    );
    expect(errors).toEqual([]);
    expect(invoices.length).toBe(2);
    expect(invoices[1].payment_date).toBeNull();
  });

  it("reports bad rows inline with row numbers, keeping good ones", () => {
    const { invoices, errors } = parseInvoicesCsv(
      "invoice_id,customer_id,amount,issue_date,due_date,payment_date\n" +
        "I1,acme,70000,2023-01-02,2023-01-16,\n" +
        "I2,acme,seventy,2023-02-01,2023-02-15,\n" +
        "I3,acme,70000,02/03/2023,2023-03-15,\n",
    );
    expect(invoices.map((i) => i.invoice_id)).toEqual(["I1"]);
    expect(errors.map((e) => e.row)).toEqual([1, 2]);
    expect(errors[0].message).toContain("amount");
    expect(errors[1].message).toContain("issue_date");
  });

  it("flags missing required columns", () => {
    const { errors } = parseInvoicesCsv(
      "invoice_id,amount,issue_date,due_date\nI1,70000,2023-01-02,2023-01-16\n",
    );
    expect(errors[0].message).toContain("customer_id");
  });
});

describe("sample workspace", () => {
  it("loads without row errors and covers both customers", () => {
    const ws = loadSampleWorkspace();
    expect(ws.rowErrors).toEqual([]);
    expect(new Set(ws.history.map((i) => i.customer_id))).toEqual(
      new Set(["prompt-co", "slowpay-ltd"]),
    );
    expect(ws.openInvoices.length).toBe(2);
    expect(ws.ledger.recurring_items[0].id).toBe("office-rent");
  });

  it("builds a forecast request matching the service schema", () => {
    const ws = loadSampleWorkspace();
    const req = toForecastRequest(ws, true);
    expect(req.integrate_ar).toBe(true);
    expect(req.business_id).toBe(ws.businessId);
    expect(req.horizon.start_date > req.history_window.end_date).toBe(true);
  });
});
