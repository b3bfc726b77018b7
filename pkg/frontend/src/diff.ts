/**
 * Base-vs-edited forecast comparison. Aggregation here is presentation
 * only (summing service-provided entries by month and source); no forecast
 * value is ever computed client-side.
 */

import { CASHFLOW_SOURCES, type CashFlowEntry, type ForecastResult } from "./types";

/** "2023-07-14" -> "2023-07" */
export function monthOf(isoDate: string): string {
  return isoDate.slice(0, 7);
}

export type MonthlyBySource = Map<string, Record<string, number>>;

/** Sum entries into month -> {source -> total}, covering every month in
 * [from, to] so charts get a continuous axis even for empty months. */
export function monthlyBySource(
  entries: CashFlowEntry[],
  from: string,
  to: string,
): MonthlyBySource {
  const out: MonthlyBySource = new Map();
  for (const month of monthRange(monthOf(from), monthOf(to))) {
    out.set(month, Object.fromEntries(CASHFLOW_SOURCES.map((s) => [s, 0])));
  }
  for (const entry of entries) {
    const bucket = out.get(monthOf(entry.date));
    if (bucket) bucket[entry.source] = (bucket[entry.source] ?? 0) + entry.amount;
  }
  return out;
}

export function monthRange(from: string, to: string): string[] {
  const months: string[] = [];
  let [year, month] = from.split("-").map(Number);
  const [endYear, endMonth] = to.split("-").map(Number);
  while (year < endYear || (year === endYear && month <= endMonth)) {
    months.push(`${year}-${String(month).padStart(2, "0")}`);
    month += 1;
    if (month > 12) {
      month = 1;
      year += 1;
    }
  }
  return months;
}

export interface ModuleDelta {
  source: string;
  baseTotal: number;
  editedTotal: number;
  delta: number;
}

export interface ForecastDiff {
  perModule: ModuleDelta[];
  aggregateDelta: number;
  /** month -> aggregate delta, for the side-by-side chart */
  monthlyDelta: Map<string, number>;
}

export function diffForecasts(
  base: ForecastResult,
  edited: ForecastResult,
  horizon: { start_date: string; end_date: string },
): ForecastDiff {
  const perModule = CASHFLOW_SOURCES.map((source) => {
    const baseTotal = total(base.per_module[source] ?? []);
    const editedTotal = total(edited.per_module[source] ?? []);
    return { source, baseTotal, editedTotal, delta: editedTotal - baseTotal };
  });

  const months = monthRange(monthOf(horizon.start_date), monthOf(horizon.end_date));
  const baseMonthly = monthlyTotals(base.aggregate, months);
  const editedMonthly = monthlyTotals(edited.aggregate, months);
  const monthlyDelta = new Map(
    months.map((m) => [m, (editedMonthly.get(m) ?? 0) - (baseMonthly.get(m) ?? 0)]),
  );

  return {
    perModule,
    aggregateDelta: total(edited.aggregate) - total(base.aggregate),
    monthlyDelta,
  };
}

export function isZeroDiff(diff: ForecastDiff): boolean {
  return (
    diff.aggregateDelta === 0 &&
    diff.perModule.every((m) => m.delta === 0) &&
    [...diff.monthlyDelta.values()].every((v) => v === 0)
  );
}

function total(entries: CashFlowEntry[]): number {
  return entries.reduce((sum, e) => sum + e.amount, 0);
}

function monthlyTotals(entries: CashFlowEntry[], months: string[]): Map<string, number> {
  const out = new Map(months.map((m) => [m, 0]));
  for (const entry of entries) {
    const month = monthOf(entry.date);
    if (out.has(month)) out.set(month, (out.get(month) ?? 0) + entry.amount);
  }
  return out;
}
