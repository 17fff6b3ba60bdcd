/**
 * Strict reader for the integrator's CSV diagnostics.
 *
 * Expected schema: t, q_1..q_N, H, abs_energy_error, projected. Everything
 * the plots need is the (t, abs_energy_error) pair per row.
 */

export interface EnergySeries {
  t: number[];
  error: number[];
}

export function parseEnergyCsv(text: string, source = "<csv>"): EnergySeries {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`${source}: empty file`);
  }
  const columns = lines[0].split(",");
  const tIndex = columns.indexOf("t");
  const errIndex = columns.indexOf("abs_energy_error");
  if (tIndex < 0 || errIndex < 0) {
    throw new Error(
      `${source}: missing column(s) in header "${lines[0]}" ` +
      `(need "t" and "abs_energy_error")`,
    );
  }
  if (!columns.some((c) => c.startsWith("q_"))) {
    throw new Error(`${source}: header has no q_* state columns`);
  }
  if (lines.length === 1) {
    throw new Error(`${source}: no data rows`);
  }
  const t: number[] = [];
  const error: number[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new Error(
        `${source}: line ${i + 1} has ${parts.length} fields, expected ${columns.length}`,
      );
    }
    const tv = Number(parts[tIndex]);
    const ev = Number(parts[errIndex]);
    if (!Number.isFinite(tv) || Number.isNaN(ev)) {
      throw new Error(`${source}: line ${i + 1} has non-numeric values`);
    }
    t.push(tv);
    error.push(ev);
  }
  return { t, error };
}
