import {
  ACM_COLUMNS,
  CsvTable,
  Provenance,
  TRACE_COLUMNS,
  loadCsv,
  loadParetoJson,
  numericColumn,
} from "./data.js";
import { SchemaMismatch } from "./errors.js";
import { SvgChart, extent } from "./svg.js";

export type FigureKind = "staircase" | "timeseries" | "pareto";

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  /** x/y column names for timeseries inputs (defaults: t_s / T_r_bits). */
  xColumn?: string;
  yColumn?: string;
  title?: string;
  provenance?: Provenance;
}

function footerText(provenance?: Provenance): string {
  const parts: string[] = [];
  if (provenance?.preset) parts.push(`preset=${provenance.preset}`);
  if (provenance?.seed !== undefined) parts.push(`seed=${provenance.seed}`);
  if (provenance?.version) parts.push(`ferrylink ${provenance.version}`);
  return parts.join("  ");
}

/** Per-stream rate vs distance from a rate-table CSV: one run per mode plus
    a zero tail beyond the outermost threshold. */
export function renderStaircase(spec: FigureSpec): string {
  const table = loadCsv(spec.input, ACM_COLUMNS);
  const thresholds = numericColumn(table, "threshold_m", spec.input);
  const efficiency = numericColumn(table, "spectral_efficiency", spec.input);

  const dMax = Math.max(...thresholds);
  const xEnd = dMax * 1.15;
  const segments: Array<{ x0: number; x1: number; y: number }> = [];
  for (let q = thresholds.length - 1; q >= 1; q--) {
    segments.push({ x0: thresholds[q], x1: thresholds[q - 1], y: efficiency[q] });
  }
  segments.push({ x0: dMax, x1: xEnd, y: 0 });

  const chart = new SvgChart([0, xEnd], [0, Math.max(...efficiency) * 1.1]);
  chart.axes("distance (m)", "spectral efficiency (bps/Hz)");
  chart.title(spec.title ?? "rate vs distance");
  chart.steps(segments);
  chart.footer(footerText(spec.provenance));
  return chart.render();
}

export function renderTimeseries(spec: FigureSpec): string {
  const xColumn = spec.xColumn ?? "t_s";
  const yColumn = spec.yColumn ?? "T_r_bits";
  // Trace files must carry the full documented header; other sources
  // (capacity curves) only need the requested pair of columns.
  const required = xColumn === "t_s" ? TRACE_COLUMNS : [xColumn, yColumn];
  const table: CsvTable = loadCsv(spec.input, required);
  const xs = numericColumn(table, xColumn, spec.input);
  const ys = numericColumn(table, yColumn, spec.input);

  const chart = new SvgChart(extent(xs), padTop(extent(ys)));
  chart.axes(xColumn, yColumn);
  chart.title(spec.title ?? `${yColumn} vs ${xColumn}`);
  chart.polyline(xs, ys);
  chart.footer(footerText(spec.provenance));
  return chart.render();
}

export function renderPareto(spec: FigureSpec): string {
  const records = loadParetoJson(spec.input);
  const delays = records.map((r) => r.delay_s);
  const delivered = records.map((r) => r.delivered_bits);

  const chart = new SvgChart(padTop(extent(delays)), padTop(extent(delivered)));
  chart.axes("delay (s)", "delivered (bits)");
  chart.title(spec.title ?? "non-dominated solutions");
  chart.scatter(delays, delivered);
  chart.footer(footerText(spec.provenance));
  return chart.render();
}

function padTop([lo, hi]: [number, number]): [number, number] {
  return [Math.min(lo, 0), hi + (hi - lo) * 0.05];
}

export function renderFigure(spec: FigureSpec): string {
  switch (spec.kind) {
    case "staircase":
      return renderStaircase(spec);
    case "timeseries":
      return renderTimeseries(spec);
    case "pareto":
      return renderPareto(spec);
    default:
      throw new SchemaMismatch(String(spec.kind), "figure kind");
  }
}
