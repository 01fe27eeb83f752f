/**
 * Minimal deterministic SVG line charts.
 *
 * No DOM, no timestamps, no randomness: the same inputs always produce the
 * same bytes, so rendered figures can be diffed and tested directly.
 */

export const PLOT = {
  width: 720,
  height: 480,
  margin: { top: 56, right: 24, bottom: 52, left: 64 },
};

export interface Scale {
  (v: number): number;
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const k = d1 === d0 ? 0 : (r1 - r0) / (d1 - d0);
  return (v: number) => r0 + (v - d0) * k;
}

export function log10Scale(domain: [number, number], range: [number, number]): Scale {
  if (domain[0] <= 0 || domain[1] <= 0) {
    throw new Error("log scale needs a positive domain");
  }
  const inner = linearScale([Math.log10(domain[0]), Math.log10(domain[1])], range);
  return (v: number) => inner(Math.log10(v));
}

/** Round tick positions covering [lo, hi] with a 1/2/5 step. */
export function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / Math.max(1, count);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm <= 1 ? 1 : norm <= 2 ? 2 : norm <= 5 ? 5 : 10) * mag;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

/** Decade ticks for a log axis. */
export function decadeTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, e) <= hi * (1 + 1e-9); e++) {
    out.push(Math.pow(10, e));
  }
  return out;
}

export function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e-3 && a < 1e4) {
    const s = v.toPrecision(4);
    return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
  }
  return v.toExponential(1).replace("e+", "e");
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

const px = (v: number) => v.toFixed(2).replace(/\.00$/, "");

export interface Curve {
  xs: number[];
  ys: number[];
  label: string;
  color: string;
  /** full class attribute value, e.g. "curve curve-classical" */
  cls: string;
  dash?: string;
  width?: number;
}

export interface ChartOpts {
  title: string;
  subtitle?: string;
  xLabel: string;
  yLabel: string;
  curves: Curve[];
  xDomain?: [number, number];
  yDomain?: [number, number];
  logX?: boolean;
  /** legend corner, inside the plot area */
  legend?: "tl" | "tr";
  /** extra line of text above the legend entries */
  legendTitle?: string;
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

export function lineChart(o: ChartOpts): string {
  const { width, height, margin } = PLOT;
  const x0 = margin.left;
  const x1 = width - margin.right;
  const y0 = height - margin.bottom;
  const y1 = margin.top;

  const allX = o.curves.flatMap((c) => c.xs);
  const allY = o.curves.flatMap((c) => c.ys);
  const xDom = o.xDomain ?? extent(allX);
  let yDom = o.yDomain;
  if (yDom === undefined) {
    const [lo, hi] = extent(allY);
    const pad = 0.05 * (hi - lo || Math.abs(hi) || 1);
    yDom = [lo - pad, hi + pad];
  }
  const x = o.logX ? log10Scale(xDom, [x0, x1]) : linearScale(xDom, [x0, x1]);
  const y = linearScale(yDom, [y0, y1]);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
      `width="${width}" height="${height}" font-family="Helvetica, Arial, sans-serif">`
  );
  parts.push(`<rect width="${width}" height="${height}" fill="#ffffff"/>`);
  parts.push(
    `<text x="${width / 2}" y="24" text-anchor="middle" font-size="16" ` +
      `font-weight="bold">${esc(o.title)}</text>`
  );
  if (o.subtitle) {
    parts.push(
      `<text x="${width / 2}" y="42" text-anchor="middle" font-size="12" ` +
        `fill="#555">${esc(o.subtitle)}</text>`
    );
  }

  const xTicks = o.logX ? decadeTicks(xDom[0], xDom[1]) : niceTicks(xDom[0], xDom[1]);
  const yTicks = niceTicks(yDom[0], yDom[1]);
  for (const t of xTicks) {
    const tx = px(x(t));
    parts.push(`<line x1="${tx}" y1="${y0}" x2="${tx}" y2="${y1}" stroke="#eee"/>`);
    parts.push(`<line x1="${tx}" y1="${y0}" x2="${tx}" y2="${y0 + 5}" stroke="#333"/>`);
    parts.push(
      `<text x="${tx}" y="${y0 + 18}" text-anchor="middle" font-size="11">${fmt(t)}</text>`
    );
  }
  for (const t of yTicks) {
    const ty = px(y(t));
    parts.push(`<line x1="${x0}" y1="${ty}" x2="${x1}" y2="${ty}" stroke="#eee"/>`);
    parts.push(`<line x1="${x0 - 5}" y1="${ty}" x2="${x0}" y2="${ty}" stroke="#333"/>`);
    parts.push(
      `<text x="${x0 - 8}" y="${ty}" text-anchor="end" dominant-baseline="middle" ` +
        `font-size="11">${fmt(t)}</text>`
    );
  }
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="#333"/>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="#333"/>`);
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${height - 12}" text-anchor="middle" ` +
      `font-size="13">${esc(o.xLabel)}</text>`
  );
  parts.push(
    `<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="13" ` +
      `transform="rotate(-90 18 ${(y0 + y1) / 2})">${esc(o.yLabel)}</text>`
  );

  for (const c of o.curves) {
    const pts: string[] = [];
    for (let i = 0; i < c.xs.length; i++) {
      const cx = c.xs[i]!;
      const cy = c.ys[i]!;
      pts.push(`${pts.length === 0 ? "M" : "L"}${px(x(cx))},${px(y(cy))}`);
    }
    const dash = c.dash ? ` stroke-dasharray="${c.dash}"` : "";
    parts.push(
      `<path class="${c.cls}" d="${pts.join(" ")}" fill="none" ` +
        `stroke="${c.color}" stroke-width="${c.width ?? 1.6}"${dash}/>`
    );
  }

  const lx = o.legend === "tr" ? x1 - 190 : x0 + 12;
  let ly = y1 + 10;
  if (o.legendTitle) {
    parts.push(
      `<text x="${lx}" y="${ly + 9}" font-size="12" font-weight="bold">` +
        `${esc(o.legendTitle)}</text>`
    );
    ly += 18;
  }
  for (const c of o.curves) {
    const dash = c.dash ? ` stroke-dasharray="${c.dash}"` : "";
    parts.push(
      `<line x1="${lx}" y1="${ly + 5}" x2="${lx + 26}" y2="${ly + 5}" ` +
        `stroke="${c.color}" stroke-width="2"${dash}/>`
    );
    parts.push(
      `<text x="${lx + 32}" y="${ly + 9}" font-size="12">${esc(c.label)}</text>`
    );
    ly += 17;
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
