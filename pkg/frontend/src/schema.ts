/**
 * Readers for the ultrawalk CLI artifacts.
 *
 * Every artifact starts with `#` comment lines: a tool version, a
 * `# config:` line of sorted key=value pairs, and (for CSV) a
 * `# columns:` line. The readers validate the column set against the
 * stable schema and refuse files that drift from it.
 */

import { readFileSync } from "fs";

export class SchemaError extends Error {}

export interface CsvArtifact {
  /** tool banner, e.g. "ultrawalk v0.1.0" */
  version: string;
  /** parsed `# config:` key=value pairs */
  config: Record<string, string>;
  columns: string[];
  /** row-major numeric data, one entry per column */
  rows: number[][];
}

function splitHeader(text: string, path: string): { header: string[]; body: string[] } {
  const header: string[] = [];
  const body: string[] = [];
  for (const raw of text.split("\n")) {
    const line = raw.trimEnd();
    if (line.length === 0) continue;
    if (line.startsWith("#")) header.push(line);
    else body.push(line);
  }
  if (header.length === 0) {
    throw new SchemaError(`${path}: missing '#' header lines`);
  }
  return { header, body };
}

function parseConfig(header: string[]): Record<string, string> {
  const out: Record<string, string> = {};
  const line = header.find((h) => h.startsWith("# config:"));
  if (line === undefined) return out;
  for (const pair of line.slice("# config:".length).trim().split(/\s+/)) {
    const eq = pair.indexOf("=");
    if (eq > 0) out[pair.slice(0, eq)] = pair.slice(eq + 1);
  }
  return out;
}

/** Read a CSV artifact, enforcing the exact expected column set. */
export function readCsvArtifact(path: string, expected: string[]): CsvArtifact {
  const { header, body } = splitHeader(readFileSync(path, "utf-8"), path);
  const version = (header[0] ?? "#").slice(1).trim();

  const columnsLine = header.find((h) => h.startsWith("# columns:"));
  if (columnsLine === undefined) {
    throw new SchemaError(`${path}: missing '# columns:' line`);
  }
  const columns = columnsLine.slice("# columns:".length).trim().split(",");
  for (const want of expected) {
    if (!columns.includes(want)) {
      throw new SchemaError(`${path}: missing column: ${want}`);
    }
  }
  for (const got of columns) {
    if (!expected.includes(got)) {
      throw new SchemaError(`${path}: unexpected column: ${got}`);
    }
  }

  // columns may in principle arrive reordered; index through the header
  const order = expected.map((c) => columns.indexOf(c));
  const rows: number[][] = [];
  for (const line of body) {
    const parts = line.split(",");
    if (parts.length !== columns.length) {
      throw new SchemaError(
        `${path}: row has ${parts.length} fields, expected ${columns.length}`
      );
    }
    const row = order.map((i) => Number(parts[i]));
    if (row.some((v) => Number.isNaN(v))) {
      throw new SchemaError(`${path}: non-numeric value in row: ${line}`);
    }
    rows.push(row);
  }
  return { version, config: parseConfig(header), columns: expected, rows };
}

/** Read a JSON artifact (the `#` comment lines precede the JSON body). */
export function readJsonArtifact(path: string): Record<string, unknown> {
  const { body } = splitHeader(readFileSync(path, "utf-8"), path);
  const parsed: unknown = JSON.parse(body.join("\n"));
  if (typeof parsed !== "object" || parsed === null || Array.isArray(parsed)) {
    throw new SchemaError(`${path}: JSON artifact must be an object`);
  }
  return parsed as Record<string, unknown>;
}

export const DW_CURVE_COLUMNS = [
  "epsilon",
  "inv_dw_classical",
  "inv_dw_quantum",
  "inv_dw_lambda_plus",
];

export const COLLAPSE_COLUMNS = ["t", "u", "g"];

export const ABSORPTION_COLUMNS = ["t", "cum_left", "cum_right", "interior"];
