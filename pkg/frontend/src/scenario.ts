/**
 * What-if scenario drafts.
 *
 * A draft holds an immutable base ForecastRequest plus an ordered list of
 * user edits. Edits are replayed from the base every time, so the edited
 * request is a pure function of (base, edits): undoing all edits trivially
 * restores the base, and the same edit list always produces the same
 * request. The base object is never mutated.
 */

import type { ForecastRequest, PlannedItem } from "./types";

export type ScenarioEdit =
  | { kind: "add_planned_item"; item: PlannedItem }
  | { kind: "remove_item"; id: string }
  | { kind: "toggle_integrate_ar" }
  | { kind: "mark_invoice_paid"; invoiceId: string };

export interface ScenarioDraft {
  base: ForecastRequest;
  edits: ScenarioEdit[];
}

export function newDraft(base: ForecastRequest): ScenarioDraft {
  return { base, edits: [] };
}

export function pushEdit(draft: ScenarioDraft, edit: ScenarioEdit): ScenarioDraft {
  return { base: draft.base, edits: [...draft.edits, edit] };
}

export function undoLastEdit(draft: ScenarioDraft): ScenarioDraft {
  return { base: draft.base, edits: draft.edits.slice(0, -1) };
}

export function clearEdits(draft: ScenarioDraft): ScenarioDraft {
  return { base: draft.base, edits: [] };
}

/** Replay the edit list over the base request. Order-sensitive by design:
 * adding an item and then removing it by id is a no-op, not vice versa. */
export function applyEdits(draft: ScenarioDraft): ForecastRequest {
  let request = cloneRequest(draft.base);
  for (const edit of draft.edits) {
    request = applyOne(request, edit);
  }
  return request;
}

function applyOne(req: ForecastRequest, edit: ScenarioEdit): ForecastRequest {
  switch (edit.kind) {
    case "add_planned_item":
      return {
        ...req,
        ledger: {
          ...req.ledger,
          planned_items: [...req.ledger.planned_items, { ...edit.item }],
        },
      };
    case "remove_item":
      return {
        ...req,
        ledger: {
          ...req.ledger,
          planned_items: req.ledger.planned_items.filter((p) => p.id !== edit.id),
          recurring_items: req.ledger.recurring_items.filter((r) => r.id !== edit.id),
        },
      };
    case "toggle_integrate_ar":
      return { ...req, integrate_ar: !req.integrate_ar };
    case "mark_invoice_paid":
      // a paid invoice is no longer receivable: drop it from the open set
      return {
        ...req,
        open_invoices: req.open_invoices.filter((inv) => inv.invoice_id !== edit.invoiceId),
      };
  }
}

function cloneRequest(req: ForecastRequest): ForecastRequest {
  return structuredClone(req);
}
