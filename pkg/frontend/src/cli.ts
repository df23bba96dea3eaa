#!/usr/bin/env node
/**
 * render --kind heatmap|spectra|poincare3d --in file.csv --out fig.png
 *
 * --dump prints the plotted arrays (raw CSV cell strings) as JSON for
 * diff-testing; --value <column> switches the heatmap to the diverging
 * exponent coloring. Exit codes: 0 ok, 2 bad arguments or schema.
 */

import { parseArgs } from "node:util";

import { DEFAULT_SPEC, PlotKind, PlotSpec, render } from "./render.js";

const KINDS: PlotKind[] = ["heatmap", "spectra", "poincare3d"];

export async function main(argv: string[]): Promise<number> {
  let args;
  try {
    args = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        in: { type: "string" },
        out: { type: "string" },
        dump: { type: "boolean", default: false },
        value: { type: "string" },
        "lambda-tr": { type: "string" },
        "x-label": { type: "string" },
        "y-label": { type: "string" },
      },
    });
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 2;
  }
  const v = args.values;
  if (!v.kind || !KINDS.includes(v.kind as PlotKind)) {
    process.stderr.write(`error: --kind must be one of ${KINDS.join(", ")}\n`);
    return 2;
  }
  if (!v.in) {
    process.stderr.write("error: --in <file.csv> is required\n");
    return 2;
  }
  if (!v.out && !v.dump) {
    process.stderr.write("error: --out <fig.svg|fig.png> or --dump is required\n");
    return 2;
  }
  const spec: PlotSpec = {
    ...DEFAULT_SPEC,
    kind: v.kind as PlotKind,
    input: v.in,
    output: v.out ?? null,
    dump: v.dump ?? false,
    valueColumn: v.value ?? null,
    lambdaTr: v["lambda-tr"] ? Number(v["lambda-tr"]) : DEFAULT_SPEC.lambdaTr,
    xLabel: v["x-label"] ?? DEFAULT_SPEC.xLabel,
    yLabel: v["y-label"] ?? DEFAULT_SPEC.yLabel,
  };
  try {
    const out = await render(spec);
    if (out) {
      process.stderr.write(`wrote ${out}\n`);
    }
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 2;
  }
}

main(process.argv.slice(2)).then((code) => {
  process.exitCode = code;
});
