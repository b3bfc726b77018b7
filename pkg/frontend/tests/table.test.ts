import { describe, expect, it } from "vitest";

import { formatMoney, renderAtRiskTable, renderDiffTable } from "../src/table";
import { fixtureResult, openInvoice } from "./fixtures";

describe("formatMoney", () => {
  it("renders minor units with two decimals", () => {
    expect(formatMoney(145000)).toBe("1,450.00");
    expect(formatMoney(-90000)).toBe("-900.00");
    expect(formatMoney(5)).toBe("0.05");
  });
});

describe("at-risk table", () => {
  it("renders one row per at-risk invoice with insight badge and expected date", () => {
    const result = fixtureResult({
      at_risk_invoices: [
        {
          invoice_id: "slowpay-06",
          label: "delayed",
          score: 1.2,
          expected_delay_days: 19,
          insight: "deteriorating",
        },
        {
          invoice_id: "other-01",
          label: "delayed",
          score: 0.4,
          expected_delay_days: 10,
          insight: "stable",
        },
      ],
    });
    const container = document.createElement("div");
    renderAtRiskTable(container, result, [
      openInvoice("slowpay-06", "slowpay-ltd"),
      openInvoice("other-01", "other-gmbh"),
    ]);

    const rows = container.querySelectorAll("tr.at-risk-row");
    expect(rows.length).toBe(2);

    const first = rows[0];
    expect(first.textContent).toContain("slowpay-06");
    expect(first.textContent).toContain("slowpay-ltd");
    // due 2023-07-10 + 19 days expected delay
    expect(first.textContent).toContain("2023-07-29");
    expect(first.querySelector(".insight-badge")?.textContent).toBe("deteriorating");
    expect(rows[1].querySelector(".insight-badge")?.className).toContain("insight-stable");
  });

  it("shows an empty state when nothing is at risk", () => {
    const container = document.createElement("div");
    renderAtRiskTable(container, fixtureResult(), []);
    expect(container.querySelectorAll("tr.at-risk-row").length).toBe(0);
    expect(container.querySelector(".empty-state")?.textContent).toContain("No invoices");
  });
});

describe("diff table", () => {
  it("marks deltas with direction classes", () => {
    const container = document.createElement("div");
    renderDiffTable(container, [
      { source: "nonrecurring", baseTotal: 100, editedTotal: 300, delta: 200 },
      { source: "recurring", baseTotal: -90, editedTotal: -90, delta: 0 },
    ]);
    const up = container.querySelector("tr[data-source=nonrecurring] .delta-up");
    expect(up?.textContent).toBe("+2.00");
    expect(container.querySelector("tr[data-source=recurring] .delta-zero")).toBeTruthy();
  });
});
