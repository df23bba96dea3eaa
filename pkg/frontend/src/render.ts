/** Plot-spec dispatch: load the CSV, build the SVG, write SVG or PNG. */

import { writeFileSync } from "node:fs";

import { dumpHeatmap, loadChart, renderHeatmap } from "./heatmap.js";
import { dumpPoincare, loadPoincare, renderPoincare3d } from "./poincare3d.js";
import { dumpSpectra, loadSweep, renderSpectra } from "./spectra.js";

export type PlotKind = "heatmap" | "spectra" | "poincare3d";

export interface PlotSpec {
  kind: PlotKind;
  input: string;
  output: string | null; // .svg or .png; null with dump
  dump: boolean;
  valueColumn: string | null; // heatmap only: color by an exponent column
  lambdaTr: number;
  xLabel: string;
  yLabel: string;
}

export const DEFAULT_SPEC: Omit<PlotSpec, "kind" | "input" | "output"> = {
  dump: false,
  valueColumn: null,
  lambdaTr: 1e-3,
  xLabel: "d / r10",
  yLabel: "drive amplitude",
};

export function buildSvg(spec: PlotSpec): { svg: string; dump: string } {
  switch (spec.kind) {
    case "heatmap": {
      const data = loadChart(spec.input, spec.valueColumn);
      return { svg: renderHeatmap(data, spec), dump: dumpHeatmap(data) };
    }
    case "spectra": {
      const data = loadSweep(spec.input);
      return { svg: renderSpectra(data, spec.xLabel), dump: dumpSpectra(data) };
    }
    case "poincare3d": {
      const data = loadPoincare(spec.input);
      return { svg: renderPoincare3d(data), dump: dumpPoincare(data) };
    }
    default:
      throw new Error(`unknown plot kind '${String(spec.kind)}'`);
  }
}

export async function render(spec: PlotSpec): Promise<string> {
  const { svg, dump } = buildSvg(spec);
  if (spec.dump) {
    process.stdout.write(dump + "\n");
  }
  if (spec.output === null) {
    return "";
  }
  if (spec.output.endsWith(".svg")) {
    writeFileSync(spec.output, svg, "utf-8");
  } else if (spec.output.endsWith(".png")) {
    const sharp = (await import("sharp")).default;
    const buf = await sharp(Buffer.from(svg), { density: 144 }).png().toBuffer();
    writeFileSync(spec.output, buf);
  } else {
    throw new Error(`output must end in .svg or .png, got '${spec.output}'`);
  }
  return spec.output;
}
