/** Deterministic SVG line charts: mean curves with 95% CI bands.
 *
 * No timestamps, no randomness; the same series always produce the same
 * bytes. Plotted values are embedded verbatim in each series' data-means
 * attribute so downstream checks can compare against the CSV summary.
 */

import { Series } from "./stats.js";
import { STYLE } from "./style.js";

export interface PlotOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  xLog?: boolean;
  yLog?: boolean;
}

interface Scale {
  (v: number): number;
  ticks: number[];
}

function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / (count * step0);
  const step =
    step0 * (err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1);
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return ticks;
}

function makeScale(lo: number, hi: number, r0: number, r1: number, log: boolean): Scale {
  if (log && lo > 0) {
    const [a, b] = [Math.log10(lo), Math.log10(hi)];
    const f = (v: number) => r0 + ((Math.log10(v) - a) / (b - a || 1)) * (r1 - r0);
    const ticks = niceTicks(a, b).map((t) => Math.pow(10, t));
    return Object.assign(f, { ticks });
  }
  const f = (v: number) => r0 + ((v - lo) / (hi - lo || 1)) * (r1 - r0);
  return Object.assign(f, { ticks: niceTicks(lo, hi) });
}

const fmt = (v: number) => String(Math.round(v * 100) / 100);

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderSvg(series: Series[], opts: PlotOptions): string {
  const populated = series.filter((s) => s.points.length > 0);
  if (populated.length === 0) {
    throw new Error("nothing to plot: all series are empty");
  }
  const { width, height, margin } = STYLE;
  const xs = populated.flatMap((s) => s.points.map((p) => p.x));
  const ys = populated.flatMap((s) => s.points.flatMap((p) => [p.ciLo, p.ciHi]));
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const pad = (Math.max(...ys) - Math.min(...ys)) * 0.05 || 1;
  const yLo = Math.min(...ys) - pad;
  const yHi = Math.max(...ys) + pad;

  const sx = makeScale(xLo, xHi, margin.left, width - margin.right, !!opts.xLog);
  const sy = makeScale(yLo, yHi, height - margin.bottom, margin.top, !!opts.yLog);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="${STYLE.background}"/>`,
    `<text x="${width / 2}" y="20" text-anchor="middle" style="font:${STYLE.titleFont}">${esc(opts.title)}</text>`,
  );

  for (const t of sy.ticks) {
    const y = fmt(sy(t));
    parts.push(
      `<line x1="${margin.left}" y1="${y}" x2="${width - margin.right}" y2="${y}" stroke="${STYLE.gridline}"/>`,
      `<text x="${margin.left - 6}" y="${y}" text-anchor="end" dominant-baseline="middle" style="font:${STYLE.font}">${t}</text>`,
    );
  }
  for (const t of sx.ticks) {
    if (t < xLo - 1e-12 || t > xHi + 1e-12) continue;
    const x = fmt(sx(t));
    parts.push(
      `<line x1="${x}" y1="${height - margin.bottom}" x2="${x}" y2="${height - margin.bottom + 4}" stroke="${STYLE.axis}"/>`,
      `<text x="${x}" y="${height - margin.bottom + 16}" text-anchor="middle" style="font:${STYLE.font}">${t}</text>`,
    );
  }
  parts.push(
    `<rect x="${margin.left}" y="${margin.top}" width="${width - margin.left - margin.right}" height="${height - margin.top - margin.bottom}" fill="none" stroke="${STYLE.axis}"/>`,
    `<text x="${(margin.left + width - margin.right) / 2}" y="${height - 10}" text-anchor="middle" style="font:${STYLE.font}">${esc(opts.xLabel)}</text>`,
    `<text transform="translate(16,${(margin.top + height - margin.bottom) / 2}) rotate(-90)" text-anchor="middle" style="font:${STYLE.font}">${esc(opts.yLabel)}</text>`,
  );

  populated.forEach((s, k) => {
    const color = STYLE.palette[k % STYLE.palette.length];
    const band =
      s.points.map((p) => `${fmt(sx(p.x))},${fmt(sy(p.ciHi))}`).join(" ") +
      " " +
      [...s.points].reverse().map((p) => `${fmt(sx(p.x))},${fmt(sy(p.ciLo))}`).join(" ");
    const line = s.points.map((p) => `${fmt(sx(p.x))},${fmt(sy(p.mean))}`).join(" ");
    const means = s.points.map((p) => `${p.x}:${p.mean}`).join(";");
    parts.push(
      `<g class="series" data-name="${esc(s.label)}" data-means="${means}">`,
      `<polygon points="${band}" fill="${color}" opacity="${STYLE.bandOpacity}"/>`,
      `<polyline points="${line}" fill="none" stroke="${color}" stroke-width="1.5"/>`,
      ...s.points.map(
        (p) => `<circle cx="${fmt(sx(p.x))}" cy="${fmt(sy(p.mean))}" r="2.5" fill="${color}"/>`,
      ),
      `</g>`,
    );
  });

  // legend: one row per series with its mean over the plotted points
  populated.forEach((s, k) => {
    const color = STYLE.palette[k % STYLE.palette.length];
    const y = margin.top + 14 + 14 * k;
    const avg = s.points.reduce((a, p) => a + p.mean, 0) / s.points.length;
    parts.push(
      `<line x1="${margin.left + 8}" y1="${y - 3}" x2="${margin.left + 28}" y2="${y - 3}" stroke="${color}" stroke-width="1.5"/>`,
      `<text x="${margin.left + 34}" y="${y}" style="font:${STYLE.font}">${esc(s.label)} (${avg.toFixed(3)})</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
