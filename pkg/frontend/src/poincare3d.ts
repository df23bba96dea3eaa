/**
 * 3D projection of a stroboscopic section onto (r1, u1, r2), drawn as an
 * orthographic scatter inside a wireframe box, the way the section figures
 * present attractors.
 */

import { column, numbers, POINCARE_COLUMNS, readCsv, requireColumns, Table } from "./csv.js";
import { Svg, tickLabel } from "./svg.js";

export interface SectionData {
  r1: number[];
  u1: number[];
  r2: number[];
  table: Table;
}

export function loadPoincare(path: string): SectionData {
  const t = readCsv(path);
  const cols = requireColumns(t, POINCARE_COLUMNS, path);
  return {
    r1: numbers(column(t, cols.get("r1")!)),
    u1: numbers(column(t, cols.get("u1")!)),
    r2: numbers(column(t, cols.get("r2")!)),
    table: t,
  };
}

// fixed orthographic camera: rotate about z then tilt
const AZIMUTH = (-35 * Math.PI) / 180;
const TILT = (22 * Math.PI) / 180;

function project(x: number, y: number, z: number): [number, number] {
  const ca = Math.cos(AZIMUTH);
  const sa = Math.sin(AZIMUTH);
  const ct = Math.cos(TILT);
  const st = Math.sin(TILT);
  const xr = ca * x - sa * y;
  const yr = sa * x + ca * y;
  return [xr, ct * z - st * yr];
}

function span(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  if (!(hi > lo)) {
    hi = lo + 1;
  }
  const pad = 0.05 * (hi - lo);
  return [lo - pad, hi + pad];
}

export function renderPoincare3d(data: SectionData): string {
  const W = 560;
  const H = 480;
  const svg = new Svg(W, H);
  const [r1lo, r1hi] = span(data.r1);
  const [u1lo, u1hi] = span(data.u1);
  const [r2lo, r2hi] = span(data.r2);

  const unit = (v: number, lo: number, hi: number) => (v - lo) / (hi - lo) - 0.5;

  // project the unit box corners to size the drawing
  const corners: Array<[number, number]> = [];
  for (const cx of [-0.5, 0.5]) {
    for (const cy of [-0.5, 0.5]) {
      for (const cz of [-0.5, 0.5]) {
        corners.push(project(cx, cy, cz));
      }
    }
  }
  const pxs = corners.map((c) => c[0]);
  const pys = corners.map((c) => c[1]);
  const sx = (W - 110) / (Math.max(...pxs) - Math.min(...pxs));
  const sy = (H - 120) / (Math.max(...pys) - Math.min(...pys));
  const s = Math.min(sx, sy);
  const cxp = 40 + (W - 80) / 2 - ((Math.max(...pxs) + Math.min(...pxs)) / 2) * s;
  const cyp = 30 + (H - 90) / 2 + ((Math.max(...pys) + Math.min(...pys)) / 2) * s;

  const toPix = (x: number, y: number, z: number): [number, number] => {
    const [px, py] = project(x, y, z);
    return [cxp + px * s, cyp - py * s];
  };

  // box edges
  const edge = (a: [number, number, number], b: [number, number, number]) => {
    const [x1, y1] = toPix(...a);
    const [x2, y2] = toPix(...b);
    svg.line(x1, y1, x2, y2, "#bbbbbb", 0.8);
  };
  const C = [-0.5, 0.5];
  for (const i of C) {
    for (const j of C) {
      edge([-0.5, i, j], [0.5, i, j]);
      edge([i, -0.5, j], [i, 0.5, j]);
      edge([i, j, -0.5], [i, j, 0.5]);
    }
  }

  for (let k = 0; k < data.r1.length; k++) {
    const [px, py] = toPix(
      unit(data.r1[k], r1lo, r1hi),
      unit(data.u1[k], u1lo, u1hi),
      unit(data.r2[k], r2lo, r2hi),
    );
    svg.circle(px, py, 1.4, "#111111", 0.8);
  }

  // axis labels at the box corners they run from
  const orig: [number, number, number] = [-0.5, -0.5, -0.5];
  const labels: Array<[string, [number, number, number], string]> = [
    [`r1 in [${tickLabel(r1lo)}, ${tickLabel(r1hi)}]`, [0.56, -0.5, -0.5], "start"],
    [`u1 in [${tickLabel(u1lo)}, ${tickLabel(u1hi)}]`, [-0.5, 0.62, -0.5], "middle"],
    [`r2 in [${tickLabel(r2lo)}, ${tickLabel(r2hi)}]`, [-0.5, -0.5, 0.58], "end"],
  ];
  for (const [textv, pos, anchor] of labels) {
    const [px, py] = toPix(...pos);
    svg.text(px, py, textv, 11, anchor);
  }
  const [ox, oy] = toPix(...orig);
  svg.circle(ox, oy, 1.5, "#666666");
  svg.text(W / 2, H - 14, `${data.r1.length} stroboscopic samples on (r1, u1, r2)`, 11, "middle");
  return svg.render();
}

export function dumpPoincare(data: SectionData): string {
  const cols = requireColumns(data.table, POINCARE_COLUMNS, "poincare");
  return JSON.stringify(
    {
      kind: "poincare3d",
      columns: POINCARE_COLUMNS,
      rows: data.table.raw.map((row) => POINCARE_COLUMNS.map((c) => row[cols.get(c)!])),
    },
    null,
    1,
  );
}
