/** CLI: render a results CSV to a deterministic SVG.
 *
 *   plot --preset fig3 --in results/fig3.csv --out fig3.svg
 *   plot --spec plotspec.json
 *
 * A spec file is JSON: {"input": "...", "output": "...", "x": "sweep_value",
 * "groups": ["scenario", "method"], "kind": "se"|"bound", "title": "...",
 * "xLabel": "...", "yLabel": "...", "xLog": false, "yLog": false}.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { parseResults, requireColumn } from "./csv.js";
import { PRESETS } from "./presets.js";
import { renderSvg } from "./render.js";
import { boundSeries, seSeries } from "./stats.js";

interface PlotSpec {
  input: string;
  output: string;
  x?: string;
  groups?: string[];
  kind?: "se" | "bound";
  title?: string;
  xLabel?: string;
  yLabel?: string;
  xLog?: boolean;
  yLog?: boolean;
}

function parseArgs(argv: string[]): Map<string, string> {
  const out = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    if (argv[i].startsWith("--")) {
      out.set(argv[i].slice(2), argv[i + 1] ?? "");
      i++;
    }
  }
  return out;
}

export function runPlot(spec: PlotSpec): string {
  for (const col of [spec.x ?? "sweep_value", ...(spec.groups ?? ["scenario", "method"])]) {
    requireColumn(col);
  }
  const rows = parseResults(spec.input);
  const series = spec.kind === "bound" ? boundSeries(rows) : seSeries(rows);
  const svg = renderSvg(series, {
    title: spec.title ?? spec.input,
    xLabel: spec.xLabel ?? rows[0].sweepName,
    yLabel: spec.yLabel ?? "SE (bits/s/Hz)",
    xLog: spec.xLog,
    yLog: spec.yLog,
  });
  writeFileSync(spec.output, svg);
  return spec.output;
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    if (command !== "plot") {
      process.stderr.write("usage: plot --preset NAME --in CSV --out SVG | plot --spec FILE\n");
      return 2;
    }
    const args = parseArgs(rest);
    let spec: PlotSpec;
    if (args.has("spec")) {
      spec = JSON.parse(readFileSync(args.get("spec")!, "utf8")) as PlotSpec;
    } else {
      const name = args.get("preset") ?? "";
      const preset = PRESETS[name];
      if (!preset) {
        throw new Error(`unknown preset '${name}' (known: ${Object.keys(PRESETS).join(", ")})`);
      }
      if (!args.has("in") || !args.has("out")) {
        throw new Error("--in and --out are required with --preset");
      }
      spec = { input: args.get("in")!, output: args.get("out")!, ...preset };
    }
    const path = runPlot(spec);
    process.stdout.write(path + "\n");
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("main.js")) {
  process.exit(main(process.argv.slice(2)));
}
