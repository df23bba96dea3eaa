/**
 * Exponent-vs-parameter curves from sweep.csv, one pair of effective
 * exponents per branch plus the referent, with the multistability window
 * shaded. Branches are considered coincident at a parameter value when
 * their classes match and both effective exponents agree to a small
 * tolerance; the window is the span where at least two branches stay
 * distinct by that rule.
 */

import { column, numbers, readCsv, requireColumns, SWEEP_COLUMNS, Table } from "./csv.js";
import { Scale, Svg, tickLabel, ticks } from "./svg.js";

const BRANCH_COLORS = ["#c23b3b", "#3b6fb6", "#59b55f", "#8e5bb4", "#b08a2e"];
const COINCIDE_TOL = 1e-3;

export interface SpectraData {
  /** branch label -> sorted [eps, eff1, eff2, referent, class][] */
  branches: Map<string, Array<[number, number, number, number, string]>>;
  window: [number, number] | null;
  table: Table;
}

export function loadSweep(path: string): SpectraData {
  const t = readCsv(path);
  const cols = requireColumns(t, SWEEP_COLUMNS, path);
  const eps = numbers(column(t, cols.get("eps")!));
  const e1 = numbers(column(t, cols.get("eff_l1")!));
  const e2 = numbers(column(t, cols.get("eff_l2")!));
  const cls = column(t, cols.get("class")!);
  const labels = column(t, cols.get("branch")!);
  const lambdas = SWEEP_COLUMNS.slice(3, 8).map((c) => numbers(column(t, cols.get(c)!)));

  const branches = new Map<string, Array<[number, number, number, number, string]>>();
  for (let r = 0; r < t.raw.length; r++) {
    // referent: the spectrum entry of smallest magnitude
    let ref = lambdas[0][r];
    for (const lam of lambdas) {
      if (Math.abs(lam[r]) < Math.abs(ref)) {
        ref = lam[r];
      }
    }
    const arr = branches.get(labels[r]) ?? [];
    arr.push([eps[r], e1[r], e2[r], ref, cls[r]]);
    branches.set(labels[r], arr);
  }
  for (const arr of branches.values()) {
    arr.sort((a, b) => a[0] - b[0]);
  }
  return { branches, window: multistabilityWindow(branches), table: t };
}

function multistabilityWindow(
  branches: Map<string, Array<[number, number, number, number, string]>>,
): [number, number] | null {
  if (branches.size < 2) {
    return null;
  }
  const byEps = new Map<number, Array<[number, number, string]>>();
  for (const arr of branches.values()) {
    for (const [eps, e1, e2, , cls] of arr) {
      const list = byEps.get(eps) ?? [];
      list.push([e1, e2, cls]);
      byEps.set(eps, list);
    }
  }
  const distinctEps: number[] = [];
  for (const [eps, list] of byEps) {
    if (list.length < 2) {
      continue;
    }
    const [a, b] = list;
    const coincide =
      a[2] === b[2] && Math.abs(a[0] - b[0]) < COINCIDE_TOL && Math.abs(a[1] - b[1]) < COINCIDE_TOL;
    if (!coincide) {
      distinctEps.push(eps);
    }
  }
  if (distinctEps.length === 0) {
    return null;
  }
  return [Math.min(...distinctEps), Math.max(...distinctEps)];
}

export function renderSpectra(data: SpectraData, xLabel: string): string {
  const W = 640;
  const H = 420;
  const mL = 64;
  const mR = 20;
  const mT = 24;
  const mB = 46;
  const svg = new Svg(W, H);

  let xLo = Infinity;
  let xHi = -Infinity;
  let yLo = Infinity;
  let yHi = -Infinity;
  for (const arr of data.branches.values()) {
    for (const [eps, e1, e2, ref] of arr) {
      xLo = Math.min(xLo, eps);
      xHi = Math.max(xHi, eps);
      for (const v of [e1, e2, ref]) {
        if (Number.isFinite(v)) {
          yLo = Math.min(yLo, v);
          yHi = Math.max(yHi, v);
        }
      }
    }
  }
  const pad = 0.08 * (yHi - yLo || 1);
  yLo -= pad;
  yHi += pad;
  const sx = new Scale(xLo, xHi, mL, W - mR);
  const sy = new Scale(yLo, yHi, H - mB, mT);

  if (data.window) {
    const [a, b] = data.window;
    svg.rect(sx.at(a), mT, Math.max(2, sx.at(b) - sx.at(a)), H - mB - mT, "#f3e2ae", ' fill-opacity="0.55"');
    svg.text((sx.at(a) + sx.at(b)) / 2, mT + 12, "multistable", 10, "middle");
  }

  // zero line
  svg.line(mL, sy.at(0), W - mR, sy.at(0), "#888", 1, "4,3");

  let ci = 0;
  for (const [label, arr] of data.branches) {
    const color = BRANCH_COLORS[ci % BRANCH_COLORS.length];
    const pts1 = arr.map(([eps, e1]) => [sx.at(eps), sy.at(e1)] as [number, number]);
    const pts2 = arr.map(([eps, , e2]) => [sx.at(eps), sy.at(e2)] as [number, number]);
    const ptsf = arr.map(([eps, , , ref]) => [sx.at(eps), sy.at(ref)] as [number, number]);
    svg.polyline(pts1, color, 1.6);
    svg.polyline(pts2, color, 1.0);
    svg.polyline(ptsf, "#aaaaaa", 0.8);
    svg.text(W - mR - 4, mT + 14 + ci * 14, label, 10, "end", ` fill="${color}"`);
    ci++;
  }

  svg.line(mL, mT, mL, H - mB, "#222");
  svg.line(mL, H - mB, W - mR, H - mB, "#222");
  for (const v of ticks(xLo, xHi)) {
    svg.line(sx.at(v), H - mB, sx.at(v), H - mB + 4, "#222");
    svg.text(sx.at(v), H - mB + 16, tickLabel(v), 10, "middle");
  }
  for (const v of ticks(yLo, yHi)) {
    svg.line(mL - 4, sy.at(v), mL, sy.at(v), "#222");
    svg.text(mL - 7, sy.at(v) + 3.5, tickLabel(v), 10, "end");
  }
  svg.text(mL + (W - mL - mR) / 2, H - 12, xLabel, 12, "middle");
  svg.text(16, (mT + H - mB) / 2, "exponents", 12, "middle", ` transform="rotate(-90 16 ${(mT + H - mB) / 2})"`);
  return svg.render();
}

export function dumpSpectra(data: SpectraData): string {
  const cols = requireColumns(data.table, SWEEP_COLUMNS, "sweep");
  return JSON.stringify(
    {
      kind: "spectra",
      columns: SWEEP_COLUMNS,
      rows: data.table.raw.map((row) => SWEEP_COLUMNS.map((c) => row[cols.get(c)!])),
      window: data.window,
    },
    null,
    1,
  );
}
