/**
 * Parser for semnet sweep CSVs.
 *
 * Expected header:
 *   param,value,solver,trial,seed,total_rate,n_associated,runtime_ms
 *
 * The format is plain comma-separated text with no quoting, one row per
 * (value, solver, trial) point.
 */

export interface SweepRow {
  param: string;
  value: number;
  solver: string;
  trial: number;
  seed: string; // uint64 seeds overflow JS numbers; kept verbatim
  total_rate: number;
  n_associated: number;
  runtime_ms: number;
}

export const REQUIRED_COLUMNS = [
  "param",
  "value",
  "solver",
  "trial",
  "seed",
  "total_rate",
  "n_associated",
  "runtime_ms",
] as const;

export class CsvFormatError extends Error {}

function parseNumber(cell: string, column: string, line: number): number {
  const x = Number(cell);
  if (cell === "" || !Number.isFinite(x)) {
    throw new CsvFormatError(
      `line ${line}: column '${column}' is not a finite number: '${cell}'`
    );
  }
  return x;
}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
  if (lines.length === 0) {
    throw new CsvFormatError("empty file: expected a sweep CSV header");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  for (const column of REQUIRED_COLUMNS) {
    if (!header.includes(column)) {
      throw new CsvFormatError(`missing required column '${column}'`);
    }
  }
  const idx = Object.fromEntries(header.map((h, i) => [h, i])) as Record<
    string,
    number
  >;

  const rows: SweepRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new CsvFormatError(
        `line ${i + 1}: expected ${header.length} cells, got ${cells.length}`
      );
    }
    rows.push({
      param: cells[idx.param],
      value: parseNumber(cells[idx.value], "value", i + 1),
      solver: cells[idx.solver],
      trial: parseNumber(cells[idx.trial], "trial", i + 1),
      seed: cells[idx.seed],
      total_rate: parseNumber(cells[idx.total_rate], "total_rate", i + 1),
      n_associated: parseNumber(cells[idx.n_associated], "n_associated", i + 1),
      runtime_ms: parseNumber(cells[idx.runtime_ms], "runtime_ms", i + 1),
    });
  }
  if (rows.length === 0) {
    throw new CsvFormatError("no data rows below the header");
  }
  return rows;
}
