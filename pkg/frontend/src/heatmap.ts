/**
 * Two-parameter regime heatmap from chart.csv.
 *
 * Default coloring is by dynamical class with a five-entry legend; with a
 * value column selected the cells use the diverging exponent map centered
 * at zero and the legend shows the scale with the classification threshold
 * marked.
 */

import { CHART_COLUMNS, column, numbers, readCsv, requireColumns, Table } from "./csv.js";
import { CLASS_COLORS, CLASS_ORDER, ClassName, diverging } from "./colors.js";
import { Scale, Svg, tickLabel, ticks } from "./svg.js";

export interface HeatmapData {
  nx: number;
  ny: number;
  xValues: number[];
  yValues: number[];
  classes: string[][]; // [iy][ix]
  values: number[][] | null; // exponent values when value coloring is on
  table: Table;
}

export function loadChart(path: string, valueColumn: string | null): HeatmapData {
  const t = readCsv(path);
  const cols = requireColumns(t, CHART_COLUMNS, path);
  if (valueColumn !== null && !t.header.includes(valueColumn)) {
    throw new Error(`${path}: missing column '${valueColumn}'`);
  }
  const ix = numbers(column(t, cols.get("ix")!));
  const iy = numbers(column(t, cols.get("iy")!));
  const xv = numbers(column(t, cols.get("x_value")!));
  const yv = numbers(column(t, cols.get("y_value")!));
  const cls = column(t, cols.get("class")!);
  const nx = Math.max(...ix) + 1;
  const ny = Math.max(...iy) + 1;
  const xValues = new Array<number>(nx);
  const yValues = new Array<number>(ny);
  const classes: string[][] = Array.from({ length: ny }, () => new Array(nx).fill("failed"));
  let values: number[][] | null = null;
  let vcol: number[] | null = null;
  if (valueColumn !== null) {
    vcol = numbers(column(t, t.header.indexOf(valueColumn)));
    values = Array.from({ length: ny }, () => new Array(nx).fill(NaN));
  }
  for (let r = 0; r < t.raw.length; r++) {
    const cx = ix[r];
    const cy = iy[r];
    xValues[cx] = xv[r];
    yValues[cy] = yv[r];
    classes[cy][cx] = cls[r];
    if (values && vcol) {
      values[cy][cx] = vcol[r];
    }
  }
  return { nx, ny, xValues, yValues, classes, values, table: t };
}

export interface HeatmapOptions {
  valueColumn: string | null;
  lambdaTr: number;
  xLabel: string;
  yLabel: string;
}

export function renderHeatmap(data: HeatmapData, opts: HeatmapOptions): string {
  const cell = Math.max(4, Math.min(14, Math.floor(540 / Math.max(data.nx, data.ny))));
  const plotW = cell * data.nx;
  const plotH = cell * data.ny;
  const mL = 74;
  const mT = 30;
  const mB = 52;
  const legendW = 168;
  const svg = new Svg(mL + plotW + 24 + legendW, mT + plotH + mB);

  let scale = 0;
  if (data.values) {
    for (const row of data.values) {
      for (const v of row) {
        if (Number.isFinite(v)) {
          scale = Math.max(scale, Math.abs(v));
        }
      }
    }
    if (scale === 0) {
      scale = 1;
    }
  }

  for (let iy = 0; iy < data.ny; iy++) {
    for (let ix = 0; ix < data.nx; ix++) {
      const cls = data.classes[iy][ix] as ClassName;
      let fill = CLASS_COLORS[cls] ?? CLASS_COLORS.failed;
      if (data.values) {
        fill = cls === "failed" ? CLASS_COLORS.failed : diverging(data.values[iy][ix], scale);
      }
      // row 0 at the bottom: y grows upward like the published charts
      const px = mL + ix * cell;
      const py = mT + (data.ny - 1 - iy) * cell;
      svg.rect(px, py, cell, cell, fill);
    }
  }

  // frame and axes
  svg.line(mL, mT, mL, mT + plotH, "#222");
  svg.line(mL, mT + plotH, mL + plotW, mT + plotH, "#222");
  const sx = new Scale(data.xValues[0], data.xValues[data.nx - 1], mL + cell / 2, mL + plotW - cell / 2);
  const sy = new Scale(data.yValues[0], data.yValues[data.ny - 1], mT + plotH - cell / 2, mT + cell / 2);
  for (const v of ticks(data.xValues[0], data.xValues[data.nx - 1])) {
    const px = sx.at(v);
    svg.line(px, mT + plotH, px, mT + plotH + 4, "#222");
    svg.text(px, mT + plotH + 16, tickLabel(v), 10, "middle");
  }
  for (const v of ticks(data.yValues[0], data.yValues[data.ny - 1])) {
    const py = sy.at(v);
    svg.line(mL - 4, py, mL, py, "#222");
    svg.text(mL - 7, py + 3.5, tickLabel(v), 10, "end");
  }
  svg.text(mL + plotW / 2, mT + plotH + 36, opts.xLabel, 12, "middle");
  svg.text(16, mT + plotH / 2, opts.yLabel, 12, "middle", ` transform="rotate(-90 16 ${mT + plotH / 2})"`);

  // legend: all five classes, or the diverging scale with the threshold
  const lx = mL + plotW + 24;
  if (!data.values) {
    svg.text(lx, mT + 4, "regime", 12);
    CLASS_ORDER.forEach((cls, i) => {
      const y = mT + 16 + i * 20;
      svg.rect(lx, y, 14, 14, CLASS_COLORS[cls]);
      svg.text(lx + 20, y + 11, cls, 11);
    });
  } else {
    svg.text(lx, mT + 4, "exponent", 12);
    const n = 40;
    const h = 160;
    for (let i = 0; i < n; i++) {
      const v = scale - (2 * scale * i) / (n - 1);
      svg.rect(lx, mT + 12 + (h / n) * i, 14, h / n + 0.5, diverging(v, scale));
    }
    const sv = new Scale(scale, -scale, mT + 12, mT + 12 + h);
    for (const v of [-scale, 0, scale]) {
      svg.text(lx + 20, sv.at(v) + 3.5, tickLabel(v), 10);
    }
    for (const v of [-opts.lambdaTr, opts.lambdaTr]) {
      const py = sv.at(v);
      svg.line(lx - 3, py, lx + 17, py, "#000", 1, "2,2");
    }
    svg.text(lx + 20, sv.at(opts.lambdaTr) - 4, "threshold", 9);
  }
  return svg.render();
}

export function dumpHeatmap(data: HeatmapData): string {
  // echo the raw parsed cells so a diff against the CSV is exact
  const cols = requireColumns(data.table, CHART_COLUMNS, "chart");
  const out = {
    kind: "heatmap",
    columns: CHART_COLUMNS,
    rows: data.table.raw.map((row) => CHART_COLUMNS.map((c) => row[cols.get(c)!])),
  };
  return JSON.stringify(out, null, 1);
}
