import * as fs from "fs";
import Papa from "papaparse";

export type Metric = "competitive_ratio" | "fairness";

export interface SweepRow {
  family: string;
  eps: number;
  algorithm: string;
  competitive_ratio: number;
  fairness: number | null; // null for k>1 sweeps, which carry fairness_1..k instead
  source: string;
}

// Column contract of the sweep CSVs. k>1 sweeps replace "fairness" with
// fairness_1..fairness_k; everything else is fixed.
const FIXED_COLUMNS = new Set([
  "family",
  "eps",
  "algorithm",
  "n",
  "k",
  "trials",
  "seed",
  "competitive_ratio",
  "fill_rate",
  "smoothness_violations",
  "no_accept_count",
]);
const FAIRNESS_RE = /^fairness(_[1-9]\d*)?$/;

export class SchemaError extends Error {}

function checkColumns(columns: string[], path: string): void {
  for (const c of columns) {
    if (!FIXED_COLUMNS.has(c) && !FAIRNESS_RE.test(c)) {
      throw new SchemaError(`unknown column "${c}" in ${path}`);
    }
  }
  const present = new Set(columns);
  for (const c of FIXED_COLUMNS) {
    if (!present.has(c)) {
      throw new SchemaError(`missing column "${c}" in ${path}`);
    }
  }
  if (!columns.some((c) => FAIRNESS_RE.test(c))) {
    throw new SchemaError(`missing column "fairness" in ${path}`);
  }
}

function num(raw: string, column: string, line: number, path: string): number {
  const v = Number(raw);
  if (raw === "" || raw === undefined || !Number.isFinite(v)) {
    throw new SchemaError(
      `non-numeric value "${raw}" for column "${column}" at data row ${line} in ${path}`
    );
  }
  return v;
}

export function readSweepCsv(path: string): SweepRow[] {
  const text = fs.readFileSync(path, "utf-8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new SchemaError(`cannot parse ${path}: ${e.message} (row ${e.row})`);
  }
  const columns = parsed.meta.fields ?? [];
  checkColumns(columns, path);
  if (parsed.data.length === 0) {
    throw new SchemaError(`no data rows in ${path}`);
  }
  const hasPlainFairness = columns.includes("fairness");
  return parsed.data.map((r, i) => ({
    family: r.family,
    eps: num(r.eps, "eps", i + 1, path),
    algorithm: r.algorithm,
    competitive_ratio: num(r.competitive_ratio, "competitive_ratio", i + 1, path),
    fairness: hasPlainFairness ? num(r.fairness, "fairness", i + 1, path) : null,
    source: path,
  }));
}

export function readSweepCsvs(paths: string[]): SweepRow[] {
  if (paths.length === 0) {
    throw new SchemaError("no input CSVs given");
  }
  return paths.flatMap(readSweepCsv);
}

export function metricValue(row: SweepRow, metric: Metric): number {
  if (metric === "fairness") {
    if (row.fairness === null) {
      throw new SchemaError(
        `column "fairness" not present in ${row.source} (k-select sweep?); ` +
          `cannot plot the fairness metric`
      );
    }
    return row.fairness;
  }
  return row.competitive_ratio;
}
