/**
 * Figure builders. Each one reads a single CLI artifact and renders it;
 * nothing here recomputes physics, every plotted number comes from the file.
 */

import {
  ABSORPTION_COLUMNS,
  COLLAPSE_COLUMNS,
  DW_CURVE_COLUMNS,
  readCsvArtifact,
} from "./schema";
import { Curve, fmt, lineChart } from "./svg";

export type FigureKind = "dw_curve" | "collapse" | "absorption";

export interface FigureSpec {
  input: string;
  kind: FigureKind;
  output: string;
  /** logarithmic time axis (absorption figure) */
  logX?: boolean;
  /** keep only the u >= 0 half line (collapse figure) */
  half?: boolean;
}

const SERIES_COLORS = [
  "#4361ee",
  "#e63946",
  "#2d6a4f",
  "#f3722c",
  "#7209b7",
  "#0096c7",
  "#bc6c25",
  "#6a994e",
  "#b5179e",
  "#5f0f40",
];

function describeRun(config: Record<string, string>): string {
  const bits: string[] = [];
  if (config.flavor) bits.push(config.flavor);
  if (config.eta0) bits.push(`eta0 = ${fmt(Number(config.eta0))}`);
  if (config.epsilon) bits.push(`epsilon = ${fmt(Number(config.epsilon))}`);
  return bits.join(", ");
}

export function plotDwCurve(spec: FigureSpec): string {
  const art = readCsvArtifact(spec.input, DW_CURVE_COLUMNS);
  const eps = art.rows.map((r) => r[0]!);
  const curve = (col: number, label: string, cls: string, color: string, dash?: string): Curve => ({
    xs: eps,
    ys: art.rows.map((r) => r[col]!),
    label,
    cls: `curve curve-${cls}`,
    color,
    dash,
  });
  return lineChart({
    title: "Inverse walk dimension vs barrier decay",
    subtitle: `${art.rows.length}-point epsilon grid`,
    xLabel: "epsilon",
    yLabel: "1 / d_w",
    xDomain: [0, 1],
    yDomain: [0, 1.05],
    curves: [
      curve(1, "classical", "classical", "#4361ee"),
      curve(2, "quantum", "quantum", "#e63946"),
      curve(3, "from lambda_+ (unphysical)", "lambda", "#6c757d", "6,4"),
    ],
    legend: "tl",
  });
}

export function plotCollapse(spec: FigureSpec): string {
  const art = readCsvArtifact(spec.input, COLLAPSE_COLUMNS);
  const byTime = new Map<number, { us: number[]; gs: number[] }>();
  for (const [t, u, g] of art.rows as [number, number, number][]) {
    if (spec.half && u < 0) continue;
    let s = byTime.get(t);
    if (s === undefined) {
      s = { us: [], gs: [] };
      byTime.set(t, s);
    }
    s.us.push(u);
    s.gs.push(g);
  }
  const times = [...byTime.keys()].sort((a, b) => a - b);
  const curves: Curve[] = times.map((t, i) => {
    const s = byTime.get(t)!;
    return {
      xs: s.us,
      ys: s.gs,
      label: `t = ${t}`,
      cls: `series series-t${t}`,
      color: SERIES_COLORS[i % SERIES_COLORS.length]!,
      width: 1.3,
    };
  });
  const dw = art.config.dw ? fmt(Number(art.config.dw)) : "?";
  return lineChart({
    title: "Density collapse in the pseudo-velocity u = x / t^(1/d_w)",
    subtitle: describeRun(art.config),
    xLabel: "u",
    yLabel: "t^(1/d_w) * density",
    curves,
    legend: "tr",
    legendTitle: `d_w = ${dw}`,
  });
}

export function plotAbsorption(spec: FigureSpec): string {
  const art = readCsvArtifact(spec.input, ABSORPTION_COLUMNS);
  // t = 0 cannot sit on a log axis
  const rows = spec.logX ? art.rows.filter((r) => r[0]! > 0) : art.rows;
  const ts = rows.map((r) => r[0]!);
  const curve = (col: number, label: string, cls: string, color: string): Curve => ({
    xs: ts,
    ys: rows.map((r) => r[col]!),
    label,
    cls: `curve curve-${cls}`,
    color,
  });
  return lineChart({
    title: "Cumulative first-passage weight at the walls",
    subtitle: describeRun(art.config),
    xLabel: "t",
    yLabel: "weight",
    yDomain: [0, 1.05],
    logX: spec.logX,
    curves: [
      curve(1, "left wall", "cum_left", "#4361ee"),
      curve(2, "right wall", "cum_right", "#e63946"),
      curve(3, "interior", "interior", "#2d6a4f"),
    ],
    legend: "tl",
  });
}

export function renderFigure(spec: FigureSpec): string {
  switch (spec.kind) {
    case "dw_curve":
      return plotDwCurve(spec);
    case "collapse":
      return plotCollapse(spec);
    case "absorption":
      return plotAbsorption(spec);
  }
}
