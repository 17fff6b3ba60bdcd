import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { renderEnergyError } from "./render.js";

const argv = yargs(hideBin(process.argv))
  .usage("$0 [options] <csv...>  render energy-error figures from run CSVs")
  .option("out", {
    type: "string",
    demandOption: true,
    describe: "output SVG path",
  })
  .option("title", { type: "string", describe: "figure title" })
  .option("label", {
    type: "array",
    string: true,
    nargs: 1,
    describe: "series label, repeat once per input CSV",
  })
  .option("log", {
    type: "boolean",
    default: false,
    describe: "log-scale error axis",
  })
  .demandCommand(1, "need at least one input CSV")
  .strict()
  .parseSync();

try {
  const result = renderEnergyError({
    inputs: argv._.map(String),
    output: argv.out,
    title: argv.title,
    labels: argv.label as string[] | undefined,
    logScale: argv.log,
  });
  for (const s of result.series) {
    console.log(`${s.label}: ${s.points} rows, max error ${s.max.toExponential(6)}`);
  }
  console.log(`wrote ${result.output}`);
} catch (err) {
  console.error(`error: ${err instanceof Error ? err.message : err}`);
  process.exit(2);
}
