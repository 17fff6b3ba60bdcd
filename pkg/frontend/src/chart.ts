/**
 * Deterministic SVG line charts. No DOM, no timestamps: the output is a
 * pure function of the data and options, so identical inputs give
 * byte-identical files.
 */

export interface Series {
  label: string;
  t: number[];
  values: number[];
}

export interface ChartOptions {
  title?: string;
  logScale?: boolean;
  width?: number;
  height?: number;
  xLabel?: string;
  yLabel?: string;
  /** decimation budget per series; <= 0 disables decimation */
  maxPointsPerSeries?: number;
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

interface Point {
  t: number;
  v: number;
}

/**
 * Bucketed min/max decimation: each bucket contributes its lowest and
 * highest point (in time order), so extrema survive exactly.
 */
export function decimate(points: Point[], budget: number): Point[] {
  if (budget <= 0 || points.length <= budget) {
    return points;
  }
  const buckets = Math.max(1, Math.floor(budget / 2));
  const perBucket = points.length / buckets;
  const out: Point[] = [];
  for (let b = 0; b < buckets; b++) {
    const start = Math.floor(b * perBucket);
    const end = Math.min(points.length, Math.floor((b + 1) * perBucket));
    if (start >= end) continue;
    let lo = start;
    let hi = start;
    for (let i = start; i < end; i++) {
      if (points[i].v < points[lo].v) lo = i;
      if (points[i].v > points[hi].v) hi = i;
    }
    const picked = lo === hi ? [lo] : [Math.min(lo, hi), Math.max(lo, hi)];
    for (const i of picked) out.push(points[i]);
  }
  return out;
}

function niceTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) {
    return [lo];
  }
  const rawStep = (hi - lo) / target;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= rawStep) {
      step = m * mag;
      break;
    }
  }
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * step; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    return v.toExponential(1).replace("e+", "e").replace(/\.0e/, "e");
  }
  return String(Number(v.toPrecision(6)));
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderLineChart(series: Series[], opts: ChartOptions = {}): string {
  if (series.length === 0) {
    throw new Error("nothing to plot: no series");
  }
  const width = opts.width ?? 900;
  const height = opts.height ?? 520;
  const margin = { left: 86, right: 24, top: opts.title ? 46 : 24, bottom: 58 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;
  const log = opts.logScale ?? false;
  const budget = opts.maxPointsPerSeries ?? 4000;

  const prepared = series.map((s) => {
    if (s.t.length !== s.values.length) {
      throw new Error(`series "${s.label}": t and values differ in length`);
    }
    let pts: Point[] = s.t.map((t, i) => ({ t, v: s.values[i] }));
    if (log) {
      pts = pts.filter((p) => p.v > 0);
    }
    if (pts.length === 0) {
      throw new Error(
        `series "${s.label}": no plottable points` + (log ? " on a log axis" : ""),
      );
    }
    return { label: s.label, points: decimate(pts, budget) };
  });

  const yOf = (v: number) => (log ? Math.log10(v) : v);
  let tMin = Infinity, tMax = -Infinity, yMin = Infinity, yMax = -Infinity;
  for (const s of prepared) {
    for (const p of s.points) {
      if (p.t < tMin) tMin = p.t;
      if (p.t > tMax) tMax = p.t;
      const y = yOf(p.v);
      if (y < yMin) yMin = y;
      if (y > yMax) yMax = y;
    }
  }
  if (tMax === tMin) tMax = tMin + 1;
  if (yMax === yMin) {
    yMax = yMin + (yMin === 0 ? 1 : Math.abs(yMin) * 0.5);
  }
  const padY = 0.04 * (yMax - yMin);
  yMin -= padY;
  yMax += padY;

  const sx = (t: number) => margin.left + ((t - tMin) / (tMax - tMin)) * plotW;
  const sy = (v: number) => margin.top + (1 - (yOf(v) - yMin) / (yMax - yMin)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  if (opts.title) {
    parts.push(
      `<text x="${width / 2}" y="26" text-anchor="middle" font-size="17">` +
      `${escapeXml(opts.title)}</text>`,
    );
  }

  // axes, ticks, grid
  const axisColor = "#333333";
  const gridColor = "#dddddd";
  const xTicks = niceTicks(tMin, tMax);
  const yTicksRaw = log
    ? niceTicks(Math.ceil(yMin), Math.floor(yMax), 6).filter(Number.isInteger)
    : niceTicks(yMin, yMax);
  for (const tv of xTicks) {
    const x = sx(tv);
    parts.push(`<line x1="${x.toFixed(2)}" y1="${margin.top}" x2="${x.toFixed(2)}" ` +
      `y2="${margin.top + plotH}" stroke="${gridColor}"/>`);
    parts.push(`<text x="${x.toFixed(2)}" y="${margin.top + plotH + 20}" ` +
      `text-anchor="middle" font-size="12">${formatTick(tv)}</text>`);
  }
  for (const yv of yTicksRaw) {
    const y = margin.top + (1 - (yv - yMin) / (yMax - yMin)) * plotH;
    const label = log ? `1e${yv}` : formatTick(yv);
    parts.push(`<line x1="${margin.left}" y1="${y.toFixed(2)}" ` +
      `x2="${margin.left + plotW}" y2="${y.toFixed(2)}" stroke="${gridColor}"/>`);
    parts.push(`<text x="${margin.left - 8}" y="${(y + 4).toFixed(2)}" ` +
      `text-anchor="end" font-size="12">${label}</text>`);
  }
  parts.push(`<rect x="${margin.left}" y="${margin.top}" width="${plotW}" ` +
    `height="${plotH}" fill="none" stroke="${axisColor}"/>`);
  parts.push(`<text x="${margin.left + plotW / 2}" y="${height - 14}" ` +
    `text-anchor="middle" font-size="14">${escapeXml(opts.xLabel ?? "t")}</text>`);
  const yLabel = opts.yLabel ?? "abs_energy_error";
  parts.push(`<text x="20" y="${margin.top + plotH / 2}" text-anchor="middle" ` +
    `font-size="14" transform="rotate(-90 20 ${margin.top + plotH / 2})">` +
    `${escapeXml(yLabel)}</text>`);

  // curves
  prepared.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const coords = s.points
      .map((p) => `${sx(p.t).toFixed(2)},${sy(p.v).toFixed(2)}`)
      .join(" ");
    parts.push(`<polyline points="${coords}" fill="none" stroke="${color}" ` +
      `stroke-width="1.2"/>`);
  });

  // legend
  prepared.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const y = margin.top + 16 + i * 18;
    const x = margin.left + plotW - 190;
    parts.push(`<line x1="${x}" y1="${y - 4}" x2="${x + 26}" y2="${y - 4}" ` +
      `stroke="${color}" stroke-width="2"/>`);
    parts.push(`<text x="${x + 32}" y="${y}" font-size="12">` +
      `${escapeXml(s.label)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
