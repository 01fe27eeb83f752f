import { execFileSync } from "child_process";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it, vi } from "vitest";

import { main } from "../src/cli";

const FIX = join(__dirname, "fixtures");
const DIST_CLI = join(__dirname, "..", "dist", "cli.js");

const outDir = () => mkdtempSync(join(tmpdir(), "ultrawalk-plots-"));

describe("cli main", () => {
  it("renders every figure kind", () => {
    const dir = outDir();
    const jobs: [string, string][] = [
      ["dw", "dw_curve.csv"],
      ["collapse", "collapse.csv"],
      ["absorb", "absorption.csv"],
    ];
    for (const [cmd, fixture] of jobs) {
      const out = join(dir, `${cmd}.svg`);
      const code = main([cmd, "--input", join(FIX, fixture), "--output", out]);
      expect(code).toBe(0);
      expect(readFileSync(out, "utf-8")).toMatch(/^<svg /);
    }
  });

  it("accepts the style flags", () => {
    const dir = outDir();
    expect(
      main([
        "collapse", "--input", join(FIX, "collapse.csv"),
        "--output", join(dir, "half.svg"), "--half",
      ])
    ).toBe(0);
    expect(
      main([
        "absorb", "--input", join(FIX, "absorption.csv"),
        "--output", join(dir, "log.svg"), "--log-x",
      ])
    ).toBe(0);
  });

  it("rejects bad invocations", () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    try {
      expect(main([])).toBe(1);
      expect(main(["spectrogram", "--input", "x", "--output", "y"])).toBe(1);
      expect(main(["dw", "--input", join(FIX, "dw_curve.csv")])).toBe(1);
      expect(main(["dw", "--wat"])).toBe(1);
      expect(main(["dw", "--input"])).toBe(1);
    } finally {
      err.mockRestore();
    }
  });

  it("exits nonzero naming a missing column", () => {
    const dir = outDir();
    const bad = join(dir, "bad.csv");
    writeFileSync(
      bad,
      readFileSync(join(FIX, "dw_curve.csv"), "utf-8").replace(
        "inv_dw_quantum",
        "inv_dw_q"
      )
    );
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    try {
      const code = main(["dw", "--input", bad, "--output", join(dir, "x.svg")]);
      expect(code).toBe(1);
      const message = err.mock.calls.map((c) => c.join(" ")).join("\n");
      expect(message).toContain("missing column: inv_dw_quantum");
    } finally {
      err.mockRestore();
    }
  });

  it.skipIf(!existsSync(DIST_CLI))("runs from the compiled bundle", () => {
    const out = join(outDir(), "dw.svg");
    execFileSync(process.execPath, [
      DIST_CLI, "dw", "--input", join(FIX, "dw_curve.csv"), "--output", out,
    ]);
    expect(existsSync(out)).toBe(true);
  });
});
