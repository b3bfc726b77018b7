/**
 * Stacked area chart of the monthly forecast, one band per sub-module
 * (hourly / nonrecurring / flatrate / recurring). Pure SVG via d3; the
 * input is the service's ForecastResult, aggregated by month for display.
 */

import * as d3 from "d3";

import { monthlyBySource } from "./diff";
import { CASHFLOW_SOURCES, type DateWindow, type ForecastResult } from "./types";

const BAND_COLORS: Record<string, string> = {
  hourly: "#4e79a7",
  nonrecurring: "#f28e2b",
  flatrate: "#59a14f",
  recurring: "#e15759",
};

export interface ChartOptions {
  width?: number;
  height?: number;
}

export function renderForecastChart(
  container: HTMLElement,
  result: ForecastResult,
  horizon: DateWindow,
  options: ChartOptions = {},
): SVGSVGElement {
  const width = options.width ?? 640;
  const height = options.height ?? 280;
  const margin = { top: 12, right: 16, bottom: 28, left: 64 };

  container.replaceChildren();

  const byMonth = monthlyBySource(
    Object.values(result.per_module).flat(),
    horizon.start_date,
    horizon.end_date,
  );
  const months = [...byMonth.keys()];
  const rows = months.map((month) => ({ month, ...byMonth.get(month)! }));

  // only stack sources that actually contribute, so an all-recurring
  // forecast renders as a single band
  const activeSources = CASHFLOW_SOURCES.filter((s) =>
    rows.some((r) => (r as Record<string, unknown>)[s] !== 0),
  );

  const svg = d3
    .create("svg")
    .attr("width", width)
    .attr("height", height)
    .attr("viewBox", `0 0 ${width} ${height}`)
    .attr("role", "img")
    .attr("aria-label", "monthly cash-flow forecast by source");

  const stack = d3
    .stack<Record<string, number | string>>()
    .keys(activeSources)
    .offset(d3.stackOffsetDiverging);
  const series = stack(rows as unknown as Record<string, number>[]);

  const x = d3
    .scalePoint<string>()
    .domain(months)
    .range([margin.left, width - margin.right]);
  const yExtent = [
    Math.min(0, d3.min(series, (s) => d3.min(s, (d) => d[0])) ?? 0),
    Math.max(0, d3.max(series, (s) => d3.max(s, (d) => d[1])) ?? 0),
  ];
  const y = d3
    .scaleLinear()
    .domain(yExtent)
    .nice()
    .range([height - margin.bottom, margin.top]);

  const area = d3
    .area<d3.SeriesPoint<Record<string, number | string>>>()
    .x((d) => x((d.data as { month: string }).month) ?? 0)
    .y0((d) => y(d[0]))
    .y1((d) => y(d[1]));

  svg
    .append("g")
    .selectAll("path")
    .data(series)
    .join("path")
    .attr("class", "band")
    .attr("data-source", (s) => s.key)
    .attr("fill", (s) => BAND_COLORS[s.key] ?? "#999")
    .attr("fill-opacity", 0.75)
    .attr("d", area);

  svg
    .append("g")
    .attr("transform", `translate(0,${height - margin.bottom})`)
    .call(d3.axisBottom(x));
  svg
    .append("g")
    .attr("transform", `translate(${margin.left},0)`)
    .call(d3.axisLeft(y).ticks(5));

  const node = svg.node()!;
  container.appendChild(node);
  return node;
}
