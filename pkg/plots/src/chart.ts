/**
 * SVG line charts for sweep results: mean total rate vs the swept value,
 * one line + marker style per solver, optional faint per-trial traces.
 * Hand-rolled SVG so the tool stays dependency-free and headless.
 */

import { SweepRow } from "./csv.js";

export interface SolverSeries {
  solver: string;
  /** swept values, ascending */
  xs: number[];
  /** mean total_rate per value (no normalization of any kind) */
  ys: number[];
  /** per-trial traces keyed by trial id */
  trials: Map<number, number[]>;
}

export interface ChartOptions {
  title?: string;
  xLabel?: string;
  yLabel?: string;
  perTrial?: boolean;
  width?: number;
  height?: number;
}

export const AXIS_LABELS: Record<string, string> = {
  cpu_speed: "Cloudlet computation capacity (cycles/s)",
  bandwidth: "Wireless channel bandwidth (Hz)",
  eps_min: "Minimum semantic accuracy requirement",
  t_max: "Maximum delay tolerance (s)",
  n_cloudlets: "Number of cloudlets per station",
  d_knowledge: "Knowledge data size (bits)",
};

const SERIES_STYLE = [
  { color: "#1f77b4", dash: "", marker: "circle" },
  { color: "#d62728", dash: "6,3", marker: "square" },
  { color: "#2ca02c", dash: "2,3", marker: "triangle" },
  { color: "#9467bd", dash: "8,3,2,3", marker: "diamond" },
];

export function aggregate(rows: SweepRow[]): SolverSeries[] {
  const solvers: string[] = [];
  for (const r of rows) {
    if (!solvers.includes(r.solver)) solvers.push(r.solver);
  }
  const values = [...new Set(rows.map((r) => r.value))].sort((a, b) => a - b);

  return solvers.map((solver) => {
    const ys: number[] = [];
    const trials = new Map<number, number[]>();
    for (const v of values) {
      const at = rows.filter((r) => r.solver === solver && r.value === v);
      if (at.length === 0) {
        throw new Error(`solver '${solver}' has no rows at value ${v}`);
      }
      ys.push(at.reduce((s, r) => s + r.total_rate, 0) / at.length);
      for (const r of at) {
        if (!trials.has(r.trial)) trials.set(r.trial, []);
        trials.get(r.trial)!.push(r.total_rate);
      }
    }
    return { solver, xs: values, ys, trials };
  });
}

function niceTicks(lo: number, hi: number, n = 5): number[] {
  if (hi <= lo) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const candidates = [step, 2 * step, 2.5 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= n) ?? 10 * step;
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / chosen) * chosen; t <= hi + 1e-12 * span; t += chosen) {
    ticks.push(t);
  }
  return ticks;
}

function fmtTick(x: number): string {
  if (x === 0) return "0";
  const ax = Math.abs(x);
  if (ax >= 1e5 || ax < 1e-3) {
    const exp = Math.floor(Math.log10(ax));
    const mant = x / Math.pow(10, exp);
    const m = Math.round(mant * 100) / 100;
    return `${m}e${exp}`;
  }
  return `${Math.round(x * 1000) / 1000}`;
}

function marker(shape: string, x: number, y: number, color: string): string {
  const r = 3.5;
  switch (shape) {
    case "square":
      return `<rect x="${x - r}" y="${y - r}" width="${2 * r}" height="${2 * r}" fill="${color}"/>`;
    case "triangle":
      return `<polygon points="${x},${y - r} ${x - r},${y + r} ${x + r},${y + r}" fill="${color}"/>`;
    case "diamond":
      return `<polygon points="${x},${y - r} ${x + r},${y} ${x},${y + r} ${x - r},${y}" fill="${color}"/>`;
    default:
      return `<circle cx="${x}" cy="${y}" r="${r}" fill="${color}"/>`;
  }
}

export interface BuiltChart {
  svg: string;
  series: SolverSeries[];
}

export function buildSweepChart(rows: SweepRow[], opts: ChartOptions = {}): BuiltChart {
  const series = aggregate(rows);
  const param = rows[0].param;
  const width = opts.width ?? 720;
  const height = opts.height ?? 480;
  const margin = { left: 86, right: 24, top: 40, bottom: 64 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;

  const xs = series[0].xs;
  const allY = series.flatMap((s) =>
    opts.perTrial ? [...s.ys, ...[...s.trials.values()].flat()] : s.ys
  );
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yLo = Math.min(0, ...allY);
  const yHi = Math.max(...allY) * 1.05 || 1;

  const sx = (x: number) =>
    margin.left + (xHi === xLo ? plotW / 2 : ((x - xLo) / (xHi - xLo)) * plotW);
  const sy = (y: number) => margin.top + plotH - ((y - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  if (opts.title) {
    parts.push(
      `<text x="${width / 2}" y="20" text-anchor="middle" font-size="15">${opts.title}</text>`
    );
  }

  // axes and grid
  for (const t of niceTicks(yLo, yHi)) {
    const y = sy(t);
    parts.push(
      `<line x1="${margin.left}" y1="${y}" x2="${width - margin.right}" y2="${y}" stroke="#ddd"/>`,
      `<text x="${margin.left - 8}" y="${y + 4}" text-anchor="end">${fmtTick(t)}</text>`
    );
  }
  for (const t of niceTicks(xLo, xHi)) {
    const x = sx(t);
    parts.push(
      `<line x1="${x}" y1="${margin.top}" x2="${x}" y2="${height - margin.bottom}" stroke="#eee"/>`,
      `<text x="${x}" y="${height - margin.bottom + 18}" text-anchor="middle">${fmtTick(t)}</text>`
    );
  }
  parts.push(
    `<line x1="${margin.left}" y1="${margin.top}" x2="${margin.left}" y2="${height - margin.bottom}" stroke="black"/>`,
    `<line x1="${margin.left}" y1="${height - margin.bottom}" x2="${width - margin.right}" y2="${height - margin.bottom}" stroke="black"/>`
  );
  const xLabel = opts.xLabel ?? AXIS_LABELS[param] ?? param;
  const yLabel = opts.yLabel ?? "Total semantic rate (suts/s)";
  parts.push(
    `<text x="${margin.left + plotW / 2}" y="${height - 16}" text-anchor="middle">${xLabel}</text>`,
    `<text transform="translate(18,${margin.top + plotH / 2}) rotate(-90)" text-anchor="middle">${yLabel}</text>`
  );

  // series
  series.forEach((s, i) => {
    const style = SERIES_STYLE[i % SERIES_STYLE.length];
    if (opts.perTrial) {
      for (const [trial, ys] of s.trials) {
        const pts = s.xs.map((x, j) => `${sx(x)},${sy(ys[j])}`).join(" ");
        parts.push(
          `<polyline data-solver="${s.solver}" data-trial="${trial}" points="${pts}" fill="none" stroke="${style.color}" stroke-width="1" opacity="0.25"/>`
        );
      }
    }
    const pts = s.xs.map((x, j) => `${sx(x)},${sy(s.ys[j])}`).join(" ");
    const dash = style.dash ? ` stroke-dasharray="${style.dash}"` : "";
    parts.push(
      `<polyline data-solver="${s.solver}" data-kind="mean" points="${pts}" fill="none" stroke="${style.color}" stroke-width="2"${dash}/>`
    );
    s.xs.forEach((x, j) => parts.push(marker(style.marker, sx(x), sy(s.ys[j]), style.color)));
  });

  // legend
  const legendX = margin.left + 12;
  series.forEach((s, i) => {
    const style = SERIES_STYLE[i % SERIES_STYLE.length];
    const y = margin.top + 10 + 18 * i;
    const dash = style.dash ? ` stroke-dasharray="${style.dash}"` : "";
    parts.push(
      `<line x1="${legendX}" y1="${y}" x2="${legendX + 28}" y2="${y}" stroke="${style.color}" stroke-width="2"${dash}/>`,
      marker(style.marker, legendX + 14, y, style.color),
      `<text x="${legendX + 34}" y="${y + 4}">${s.solver}</text>`
    );
  });

  parts.push("</svg>");
  return { svg: parts.join("\n"), series };
}
