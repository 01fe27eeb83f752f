import { join } from "path";
import { describe, expect, it } from "vitest";

import { plotAbsorption, plotCollapse, plotDwCurve } from "../src/figures";
import { COLLAPSE_COLUMNS, DW_CURVE_COLUMNS, readCsvArtifact } from "../src/schema";
import { linearScale, PLOT } from "../src/svg";

const FIX = join(__dirname, "fixtures");

const spec = (input: string, kind: "dw_curve" | "collapse" | "absorption", extra = {}) => ({
  input: join(FIX, input),
  kind,
  output: "unused.svg",
  ...extra,
});

function pathD(svg: string, cls: string): string {
  const m = svg.match(new RegExp(`class="${cls}" d="([^"]+)"`));
  expect(m, `path with class ${cls}`).not.toBeNull();
  return m![1]!;
}

const px = (v: number) => v.toFixed(2).replace(/\.00$/, "");

describe("plotDwCurve", () => {
  const svg = plotDwCurve(spec("dw_curve.csv", "dw_curve"));

  it("renders three labeled curves", () => {
    expect(svg.match(/class="curve curve-/g)).toHaveLength(3);
    expect(svg).toContain('class="curve curve-classical"');
    expect(svg).toContain('class="curve curve-quantum"');
    expect(svg).toContain('class="curve curve-lambda"');
  });

  it("draws the lambda_+ curve dashed and labeled unphysical", () => {
    expect(pathD(svg, "curve curve-lambda")).toBeTruthy();
    expect(svg).toMatch(/curve curve-lambda"[^>]*stroke-dasharray/);
    expect(svg).toContain("unphysical");
  });

  it("shows the classical plateau at 1/d_w = 0.5 for epsilon >= 0.5", () => {
    const art = readCsvArtifact(join(FIX, "dw_curve.csv"), DW_CURVE_COLUMNS);
    const plateau = art.rows.filter((r) => r[0]! >= 0.5);
    expect(plateau.length).toBeGreaterThanOrEqual(50);
    for (const r of plateau) expect(r[1]!).toBeCloseTo(0.5, 12);

    const y = linearScale([0, 1.05], [PLOT.height - PLOT.margin.bottom, PLOT.margin.top]);
    const d = pathD(svg, "curve curve-classical");
    const hits = d.match(new RegExp(`,${px(y(0.5)).replace(".", "\\.")}(?= |$)`, "g"));
    expect(hits!.length).toBeGreaterThanOrEqual(plateau.length);
  });

  it("ends the quantum curve at (1, 1)", () => {
    const x = linearScale([0, 1], [PLOT.margin.left, PLOT.width - PLOT.margin.right]);
    const y = linearScale([0, 1.05], [PLOT.height - PLOT.margin.bottom, PLOT.margin.top]);
    const d = pathD(svg, "curve curve-quantum");
    const lastPoint = d.split(" ").at(-1)!;
    expect(lastPoint).toBe(`L${px(x(1.0))},${px(y(1.0))}`);
  });
});

describe("plotCollapse", () => {
  const svg = plotCollapse(spec("collapse.csv", "collapse"));

  it("renders one series per sampled time", () => {
    expect(svg.match(/class="series series-t/g)).toHaveLength(6);
    for (const t of [2, 4, 8, 16, 32, 64]) {
      expect(svg).toContain(`class="series series-t${t}"`);
      expect(svg).toContain(`t = ${t}`);
    }
  });

  it("lists the dw value from the file header in the legend", () => {
    expect(svg).toContain("d_w = 1.661");
  });

  it("drops u < 0 points under the half option", () => {
    const art = readCsvArtifact(join(FIX, "collapse.csv"), COLLAPSE_COLUMNS);
    const full = art.rows.filter((r) => r[0] === 64).length;
    const kept = art.rows.filter((r) => r[0] === 64 && r[1]! >= 0).length;
    expect(kept).toBeLessThan(full);

    const halved = plotCollapse(spec("collapse.csv", "collapse", { half: true }));
    const count = (s: string) => pathD(s, "series series-t64").split(" ").length;
    expect(count(halved)).toBe(kept);
    expect(count(svg)).toBe(full);
  });

  it("accepts input that was already written half-line", () => {
    const art = readCsvArtifact(join(FIX, "collapse_half.csv"), COLLAPSE_COLUMNS);
    expect(Math.min(...art.rows.map((r) => r[1]!))).toBeGreaterThanOrEqual(0);
    const svgHalf = plotCollapse(spec("collapse_half.csv", "collapse"));
    expect(svgHalf.match(/class="series series-t/g)).toHaveLength(4);
  });
});

describe("plotAbsorption", () => {
  it("renders the two wall totals and the interior weight", () => {
    const svg = plotAbsorption(spec("absorption.csv", "absorption"));
    expect(svg.match(/class="curve curve-/g)).toHaveLength(3);
    expect(svg).toContain('class="curve curve-cum_left"');
    expect(svg).toContain('class="curve curve-cum_right"');
    expect(svg).toContain('class="curve curve-interior"');
  });

  it("supports a log time axis, dropping t = 0", () => {
    const svg = plotAbsorption(spec("absorption.csv", "absorption", { logX: true }));
    // the run converges near t = 760, so the decades are 1, 10, 100
    expect(svg).toContain(">10<");
    expect(svg).toContain(">100<");
    expect(pathD(svg, "curve curve-interior")).not.toContain("NaN");
  });
});
