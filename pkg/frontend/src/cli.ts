#!/usr/bin/env node
/**
 * Render SVG figures from ultrawalk CLI artifacts.
 *
 * Usage:
 *   cli.js dw       --input dw_curve.csv   --output dw.svg
 *   cli.js collapse --input collapse.csv   --output collapse.svg [--half]
 *   cli.js absorb   --input absorption.csv --output absorption.svg [--log-x]
 *
 * Exit codes: 0 success, 1 bad arguments or input not matching the schema.
 */

import { writeFileSync } from "fs";
import { FigureKind, FigureSpec, renderFigure } from "./figures";

const KINDS: Record<string, FigureKind> = {
  dw: "dw_curve",
  collapse: "collapse",
  absorb: "absorption",
};

const USAGE =
  "usage: cli.js {dw|collapse|absorb} --input <artifact.csv> --output <figure.svg> " +
  "[--half] [--log-x]";

export function main(argv: string[]): number {
  const [cmd, ...rest] = argv;
  if (cmd === undefined || cmd === "--help" || cmd === "-h") {
    console.error(USAGE);
    return cmd === undefined ? 1 : 0;
  }
  const kind = KINDS[cmd];
  if (kind === undefined) {
    console.error(`error: unknown figure '${cmd}'\n${USAGE}`);
    return 1;
  }
  let input: string | undefined;
  let output: string | undefined;
  let half = false;
  let logX = false;
  for (let i = 0; i < rest.length; i++) {
    const flag = rest[i]!;
    if (flag === "--input" || flag === "--output") {
      const value = rest[++i];
      if (value === undefined) {
        console.error(`error: ${flag} needs a value\n${USAGE}`);
        return 1;
      }
      if (flag === "--input") input = value;
      else output = value;
    } else if (flag === "--half") {
      half = true;
    } else if (flag === "--log-x") {
      logX = true;
    } else {
      console.error(`error: unknown flag '${flag}'\n${USAGE}`);
      return 1;
    }
  }
  if (input === undefined || output === undefined) {
    console.error(`error: --input and --output are required\n${USAGE}`);
    return 1;
  }
  const spec: FigureSpec = { input, kind, output, half, logX };
  try {
    writeFileSync(spec.output, renderFigure(spec));
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
  console.log(`wrote ${spec.output}`);
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
