import { describe, expect, it } from "vitest";

import { applyEdits, clearEdits, newDraft, pushEdit, undoLastEdit } from "../src/scenario";
import { diffForecasts, isZeroDiff } from "../src/diff";
import { loadSampleWorkspace, toForecastRequest } from "../src/workspace";
import { fixtureResult } from "./fixtures";

function sampleRequest() {
  return toForecastRequest(loadSampleWorkspace(), true);
}

describe("scenario drafts", () => {
  it("never mutates the base request", () => {
    const base = sampleRequest();
    const snapshot = structuredClone(base);
    let draft = newDraft(base);
    draft = pushEdit(draft, {
      kind: "add_planned_item",
      item: { id: "p1", amount: 200000, month: "2023-08" },
    });
    draft = pushEdit(draft, { kind: "toggle_integrate_ar" });
    draft = pushEdit(draft, { kind: "mark_invoice_paid", invoiceId: "slowpay-06" });
    applyEdits(draft);
    expect(base).toEqual(snapshot);
  });

  it("replays edits deterministically", () => {
    let draft = newDraft(sampleRequest());
    draft = pushEdit(draft, {
      kind: "add_planned_item",
      item: { id: "p1", amount: 200000, month: "2023-08" },
    });
    draft = pushEdit(draft, { kind: "toggle_integrate_ar" });
    expect(applyEdits(draft)).toEqual(applyEdits(draft));
  });

  it("applies edits in order: add then remove is a no-op", () => {
    let draft = newDraft(sampleRequest());
    draft = pushEdit(draft, {
      kind: "add_planned_item",
      item: { id: "p1", amount: 200000, month: "2023-08" },
    });
    draft = pushEdit(draft, { kind: "remove_item", id: "p1" });
    expect(applyEdits(draft)).toEqual(draft.base);
  });

  it("toggling twice restores the flag", () => {
    let draft = newDraft(sampleRequest());
    draft = pushEdit(draft, { kind: "toggle_integrate_ar" });
    expect(applyEdits(draft).integrate_ar).toBe(false);
    draft = pushEdit(draft, { kind: "toggle_integrate_ar" });
    expect(applyEdits(draft)).toEqual(draft.base);
  });

  it("mark_invoice_paid drops the invoice from the open set", () => {
    let draft = newDraft(sampleRequest());
    draft = pushEdit(draft, { kind: "mark_invoice_paid", invoiceId: "slowpay-06" });
    const ids = applyEdits(draft).open_invoices.map((i) => i.invoice_id);
    expect(ids).toEqual(["prompt-06"]);
  });

  it("undo and clear restore the base request exactly", () => {
    let draft = newDraft(sampleRequest());
    draft = pushEdit(draft, { kind: "toggle_integrate_ar" });
    draft = pushEdit(draft, { kind: "mark_invoice_paid", invoiceId: "prompt-06" });
    expect(applyEdits(undoLastEdit(undoLastEdit(draft)))).toEqual(draft.base);
    expect(applyEdits(clearEdits(draft))).toEqual(draft.base);
  });
});

describe("forecast diff", () => {
  const horizon = { start_date: "2023-07-01", end_date: "2023-09-30" };

  it("is identically zero when base and edited agree", () => {
    const diff = diffForecasts(fixtureResult(), fixtureResult(), horizon);
    expect(isZeroDiff(diff)).toBe(true);
  });

  it("reports per-module and monthly deltas", () => {
    const base = fixtureResult();
    const edited = fixtureResult();
    edited.per_module.nonrecurring = [
      ...edited.per_module.nonrecurring,
      { date: "2023-09-15", amount: 50000, source: "nonrecurring", origin_id: null },
    ];
    edited.aggregate = [
      ...edited.aggregate,
      { date: "2023-09-15", amount: 50000, source: "nonrecurring", origin_id: null },
    ];
    const diff = diffForecasts(base, edited, horizon);
    expect(diff.aggregateDelta).toBe(50000);
    expect(diff.perModule.find((m) => m.source === "nonrecurring")?.delta).toBe(50000);
    expect(diff.perModule.find((m) => m.source === "recurring")?.delta).toBe(0);
    expect(diff.monthlyDelta.get("2023-09")).toBe(50000);
    expect(diff.monthlyDelta.get("2023-07")).toBe(0);
  });
});
