/** Grouping and summary statistics mirroring the harness `summarize`. */

import { ResultRow } from "./csv.js";

export interface SeriesPoint {
  x: number;
  mean: number;
  ciLo: number;
  ciHi: number;
  n: number;
}

export interface Series {
  label: string;
  points: SeriesPoint[];
}

function summarize(values: number[]): { mean: number; std: number } {
  const n = values.length;
  const mean = values.reduce((a, b) => a + b, 0) / n;
  if (n < 2) return { mean, std: 0 };
  const varSum = values.reduce((a, b) => a + (b - mean) * (b - mean), 0);
  return { mean, std: Math.sqrt(varSum / (n - 1)) };
}

function toPoints(byX: Map<number, number[]>): SeriesPoint[] {
  const xs = [...byX.keys()].sort((a, b) => a - b);
  return xs.map((x) => {
    const vals = byX.get(x)!;
    const { mean, std } = summarize(vals);
    const half = vals.length > 1 ? (1.96 * std) / Math.sqrt(vals.length) : 0;
    return { x, mean, ciLo: mean - half, ciHi: mean + half, n: vals.length };
  });
}

/** Mean SE vs sweep value per (scenario, method) group. */
export function seSeries(rows: ResultRow[]): Series[] {
  const groups = new Map<string, Map<number, number[]>>();
  for (const row of rows) {
    const key = `${row.scenario} ${row.method}`;
    if (!groups.has(key)) groups.set(key, new Map());
    const byX = groups.get(key)!;
    if (!byX.has(row.sweepValue)) byX.set(row.sweepValue, []);
    byX.get(row.sweepValue)!.push(row.seBits);
  }
  return [...groups.keys()].sort().map((label) => ({
    label,
    points: toPoints(groups.get(label)!),
  }));
}

/** Per-scenario bound comparison: the SPIM-FD gap and the bound itself. */
export function boundSeries(rows: ResultRow[]): Series[] {
  const scenarios = [...new Set(rows.map((r) => r.scenario))].sort();
  const out: Series[] = [];
  for (const scenario of scenarios) {
    const gapByX = new Map<number, number[]>();
    const rhsByX = new Map<number, number[]>();
    const spim = new Map<string, number>();
    const fd = new Map<string, number>();
    for (const row of rows) {
      if (row.scenario !== scenario) continue;
      const key = `${row.sweepValue}|${row.trial}`;
      if (row.method === "SPIM") {
        spim.set(key, row.seBits);
        if (row.boundRhs !== null) {
          if (!rhsByX.has(row.sweepValue)) rhsByX.set(row.sweepValue, []);
          rhsByX.get(row.sweepValue)!.push(row.boundRhs);
        }
      } else if (row.method === "FD") {
        fd.set(key, row.seBits);
      }
    }
    for (const [key, se] of spim) {
      const other = fd.get(key);
      if (other === undefined) continue;
      const x = Number(key.split("|")[0]);
      if (!gapByX.has(x)) gapByX.set(x, []);
      gapByX.get(x)!.push(se - other);
    }
    out.push({ label: `${scenario} SPIM-FD`, points: toPoints(gapByX) });
    out.push({ label: `${scenario} bound`, points: toPoints(rhsByX) });
  }
  return out;
}
