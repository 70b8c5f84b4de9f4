#!/usr/bin/env node
/**
 * semnet-plots render --in <sweep.csv> --out <chart.svg> [--per-trial]
 *
 * Reads a semnet sweep CSV and writes an SVG line chart with one series per
 * solver (mean total rate over trials). Exits 1 on malformed or empty input,
 * 2 on I/O failures.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { buildSweepChart } from "./chart.js";
import { CsvFormatError, parseSweepCsv } from "./csv.js";

export function run(argv: string[]): number {
  if (argv[0] !== "render") {
    process.stderr.write(
      `usage: semnet-plots render --in <sweep.csv> --out <chart.svg> [--per-trial]\n`
    );
    return 1;
  }
  let parsed;
  try {
    parsed = parseArgs({
      args: argv.slice(1),
      options: {
        in: { type: "string" },
        out: { type: "string" },
        "per-trial": { type: "boolean", default: false },
        title: { type: "string" },
      },
      strict: true,
    });
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
  const { in: input, out, "per-trial": perTrial, title } = parsed.values;
  if (!input || !out) {
    process.stderr.write("error: both --in and --out are required\n");
    return 1;
  }

  let text: string;
  try {
    text = readFileSync(input, "utf-8");
  } catch (err) {
    process.stderr.write(`error: cannot read ${input}: ${(err as Error).message}\n`);
    return 2;
  }

  let chart;
  try {
    const rows = parseSweepCsv(text);
    chart = buildSweepChart(rows, { perTrial: Boolean(perTrial), title });
  } catch (err) {
    if (err instanceof CsvFormatError) {
      process.stderr.write(`error: ${input}: ${err.message}\n`);
      return 1;
    }
    throw err;
  }

  try {
    writeFileSync(out, chart.svg);
  } catch (err) {
    process.stderr.write(`error: cannot write ${out}: ${(err as Error).message}\n`);
    return 2;
  }
  const solvers = chart.series.map((s) => s.solver).join(", ");
  process.stdout.write(`${out}: ${chart.series.length} series (${solvers})\n`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
