import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { afterAll, describe, expect, it } from "vitest";
import { colorFor } from "../src/colors";
import { SweepRow } from "../src/csv";
import { ALGORITHM_ORDER, buildSvg, renderFigure } from "../src/figure";

const HEADER =
  "family,eps,algorithm,n,k,trials,seed,competitive_ratio,fairness," +
  "fill_rate,smoothness_violations,no_accept_count";
const FAMILIES = ["almost-constant", "uniform", "adversarial", "unfair"];
const ALGOS = [
  "additive-pegging",
  "multiplicative-pegging",
  "learned-dynkin",
  "highest-prediction",
  "dynkin",
];

const tmp = fs.mkdtempSync(path.join(os.tmpdir(), "figsvg-"));
afterAll(() => fs.rmSync(tmp, { recursive: true, force: true }));

function sweepCsvFiles(): string[] {
  return FAMILIES.map((family, i) => {
    const lines = [HEADER];
    for (const eps of [0.0, 0.25, 0.5, 0.75]) {
      for (const algo of ALGOS) {
        const cr = Math.max(0, 1 - eps / 2);
        const fair = Math.max(0, 0.9 - eps);
        lines.push(
          `${family},${eps.toFixed(6)},${algo},100,1,10000,0,` +
            `${cr.toFixed(6)},${fair.toFixed(6)},1.000000,0,0`
        );
      }
    }
    const p = path.join(tmp, `fig1_${family}.csv`);
    fs.writeFileSync(p, lines.join("\n") + "\n");
    return p;
  });
}

function mkRow(family: string, eps: number, algorithm: string, v: number): SweepRow {
  return {
    family,
    eps,
    algorithm,
    competitive_ratio: v,
    fairness: v,
    source: "synthetic",
  };
}

function panelCount(svg: string): number {
  return (svg.match(/class="panel"/g) ?? []).length;
}

describe("buildSvg", () => {
  it("lays out panels as metrics x families", () => {
    const rows: SweepRow[] = [];
    for (const f of FAMILIES)
      for (const a of ALGOS)
        for (const eps of [0.1, 0.2]) rows.push(mkRow(f, eps, a, 0.8));
    const svg = buildSvg(rows, ["competitive_ratio", "fairness"]);
    expect(panelCount(svg)).toBe(2 * 4);
    expect(svg.startsWith("<svg")).toBe(true);
  });

  it("renders a single panel for one family and one metric", () => {
    const svg = buildSvg(
      [mkRow("uniform", 0.1, "dynkin", 0.5), mkRow("uniform", 0.2, "dynkin", 0.6)],
      ["fairness"]
    );
    expect(panelCount(svg)).toBe(1);
  });

  it("draws the legend exactly once", () => {
    const rows = FAMILIES.map((f) => mkRow(f, 0.1, "dynkin", 0.5));
    const svg = buildSvg(rows, ["competitive_ratio", "fairness"]);
    expect(svg.match(/class="legend"/g)).toHaveLength(1);
  });

  it("orders legend entries by registry order regardless of row order", () => {
    const shuffled = ["dynkin", "additive-pegging", "value-max", "multiplicative-pegging"];
    const rows = shuffled.map((a) => mkRow("uniform", 0.1, a, 0.5));
    const svg = buildSvg(rows, ["competitive_ratio"]);
    const legend = svg.slice(svg.indexOf('class="legend"'));
    const seen = [...legend.matchAll(/>([a-z-]+)<\/text>/g)].map((m) => m[1]);
    expect(seen).toEqual(
      ALGORITHM_ORDER.filter((a) => shuffled.includes(a))
    );
  });

  it("sorts each line's points by eps", () => {
    const rows = [
      mkRow("uniform", 0.7, "dynkin", 0.3),
      mkRow("uniform", 0.1, "dynkin", 0.5),
      mkRow("uniform", 0.4, "dynkin", 0.4),
    ];
    const svg = buildSvg(rows, ["competitive_ratio"]);
    const pts = /points="([^"]+)"/.exec(svg)![1]
      .split(" ")
      .map((p) => Number(p.split(",")[0]));
    expect(pts).toEqual([...pts].sort((a, b) => a - b));
  });

  it("marks single-point series with a dot instead of an invisible line", () => {
    const svg = buildSvg([mkRow("uniform", 0.1, "dynkin", 0.5)], ["fairness"]);
    expect(svg).toContain("<circle");
    expect(svg).not.toContain("<polyline");
  });

  it("refuses an empty metric list", () => {
    expect(() => buildSvg([mkRow("uniform", 0.1, "dynkin", 0.5)], [])).toThrow(
      /no metrics/
    );
  });
});

describe("colorFor", () => {
  it("is a stable pure function of the name", () => {
    expect(colorFor("dynkin")).toBe(colorFor("dynkin"));
    expect(colorFor("dynkin")).toBe("hsl(346, 65%, 40%)");
    expect(colorFor("additive-pegging")).toBe("hsl(42, 65%, 40%)");
  });

  it("separates the registry algorithms", () => {
    const colors = ALGORITHM_ORDER.map(colorFor);
    expect(new Set(colors).size).toBe(colors.length);
  });
});

describe("renderFigure", () => {
  it("renders the sweep CSVs into a 2x4 grid file", () => {
    const out = path.join(tmp, "fig1.svg");
    renderFigure({
      inputCsvPaths: sweepCsvFiles(),
      outputImagePath: out,
      metrics: ["competitive_ratio", "fairness"],
    });
    const svg = fs.readFileSync(out, "utf-8");
    expect(svg.length).toBeGreaterThan(0);
    expect(panelCount(svg)).toBe(8);
    for (const f of FAMILIES) expect(svg).toContain(`>${f}</text>`);
  });
});
