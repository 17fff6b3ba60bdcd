import { readFileSync, writeFileSync } from "fs";
import { basename } from "path";

import { parseEnergyCsv } from "./csv.js";
import { renderLineChart, Series } from "./chart.js";

export interface PlotSpec {
  /** harness CSV files, one curve each */
  inputs: string[];
  /** output image path (SVG) */
  output: string;
  /** log-scale error axis */
  logScale?: boolean;
  title?: string;
  /** series labels; defaults to the input file names */
  labels?: string[];
}

export interface RenderedSeries {
  label: string;
  source: string;
  /** largest plotted error value of the curve */
  max: number;
  points: number;
}

export interface RenderResult {
  output: string;
  series: RenderedSeries[];
}

export function renderEnergyError(spec: PlotSpec): RenderResult {
  if (!spec.inputs || spec.inputs.length === 0) {
    throw new Error("at least one input CSV is required");
  }
  if (spec.labels && spec.labels.length !== spec.inputs.length) {
    throw new Error(
      `${spec.labels.length} labels for ${spec.inputs.length} inputs`,
    );
  }
  const series: Series[] = [];
  const rendered: RenderedSeries[] = [];
  spec.inputs.forEach((path, i) => {
    const parsed = parseEnergyCsv(readFileSync(path, "utf-8"), path);
    const label = spec.labels?.[i] ?? basename(path).replace(/\.csv$/, "");
    series.push({ label, t: parsed.t, values: parsed.error });
    rendered.push({
      label,
      source: path,
      max: parsed.error.reduce((a, b) => Math.max(a, b), -Infinity),
      points: parsed.t.length,
    });
  });
  const svg = renderLineChart(series, {
    title: spec.title,
    logScale: spec.logScale,
  });
  writeFileSync(spec.output, svg);
  return { output: spec.output, series: rendered };
}
