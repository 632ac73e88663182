#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { Metric } from "./csv";
import { renderFigure } from "./figure";

const METRIC_ALIASES: Record<string, Metric> = {
  cr: "competitive_ratio",
  competitive_ratio: "competitive_ratio",
  fairness: "fairness",
};

function parseMetrics(raw: string): Metric[] {
  const out: Metric[] = [];
  for (const part of raw.split(",").map((s) => s.trim()).filter(Boolean)) {
    const m = METRIC_ALIASES[part];
    if (!m) {
      throw new Error(
        `unknown metric "${part}" (choose from cr, competitive_ratio, fairness)`
      );
    }
    if (!out.includes(m)) out.push(m);
  }
  if (out.length === 0) throw new Error("no metrics requested");
  return out;
}

function main(): void {
  const argv = yargs(hideBin(process.argv))
    .usage("figures --csv <path>... --out <path> [--metrics cr,fairness]")
    .option("csv", {
      type: "string",
      array: true,
      demandOption: true,
      describe: "sweep CSV file(s), one per family",
    })
    .option("out", {
      type: "string",
      demandOption: true,
      describe: "output SVG path",
    })
    .option("metrics", {
      type: "string",
      default: "cr,fairness",
      describe: "comma-separated subset of {cr, fairness}",
    })
    .strict()
    .parseSync();

  try {
    renderFigure({
      inputCsvPaths: argv.csv,
      outputImagePath: argv.out,
      metrics: parseMetrics(argv.metrics),
    });
  } catch (e) {
    console.error(`figures: error: ${e instanceof Error ? e.message : e}`);
    process.exit(1);
  }
  console.log(`wrote ${argv.out}`);
}

main();
