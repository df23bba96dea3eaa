/**
 * Readers for the three CSV schemas produced by the simulation package.
 *
 * Values are kept both as raw strings (so dump mode can echo the file
 * byte-for-byte) and as parsed numbers for plotting. A missing column is a
 * hard error naming the column.
 */

import { readFileSync } from "node:fs";

export interface Table {
  header: string[];
  /** raw cell strings, row-major */
  raw: string[][];
}

export function readCsv(path: string): Table {
  const text = readFileSync(path, "utf-8");
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error(`${path}: empty file`);
  }
  const header = lines[0].split(",");
  const raw = lines.slice(1).map((l) => l.split(","));
  for (const [i, row] of raw.entries()) {
    if (row.length !== header.length) {
      throw new Error(`${path}: row ${i + 2} has ${row.length} cells, expected ${header.length}`);
    }
  }
  return { header, raw };
}

export function requireColumns(t: Table, needed: string[], path: string): Map<string, number> {
  const index = new Map<string, number>();
  for (const name of needed) {
    const i = t.header.indexOf(name);
    if (i < 0) {
      throw new Error(`${path}: missing column '${name}' (found: ${t.header.join(", ")})`);
    }
    index.set(name, i);
  }
  return index;
}

export function column(t: Table, idx: number): string[] {
  return t.raw.map((row) => row[idx]);
}

export function numbers(cells: string[]): number[] {
  return cells.map((c) => Number(c));
}

export const POINCARE_COLUMNS = ["k", "r1", "u1", "r2", "u2"];
export const SWEEP_COLUMNS = [
  "branch", "arm", "eps",
  "lambda1", "lambda2", "lambda3", "lambda4", "lambda5",
  "eff_l1", "eff_l2", "class", "sync", "period", "event",
];
export const CHART_COLUMNS = [
  "ix", "iy", "x_value", "y_value", "eff_l1", "eff_l2", "class", "converged",
];
