import * as fs from "fs";
import { Metric, SweepRow, metricValue, readSweepCsvs } from "./csv";
import { colorFor } from "./colors";

export interface FigureSpec {
  inputCsvPaths: string[];
  outputImagePath: string;
  metrics: Metric[];
}

// Mirror of the simulation package's algorithm registry order; lines and the
// legend follow it. Algorithms not listed here sort after, by appearance.
export const ALGORITHM_ORDER = [
  "additive-pegging",
  "multiplicative-pegging",
  "pegging-symmetric",
  "dynkin",
  "learned-dynkin",
  "highest-prediction",
  "value-max",
  "k-pegging",
  "fair-half",
];

const FAMILY_ORDER = ["almost-constant", "uniform", "adversarial", "unfair"];

const METRIC_LABEL: Record<Metric, string> = {
  competitive_ratio: "competitive ratio",
  fairness: "fairness",
};

function orderedBy(canonical: string[], present: string[]): string[] {
  const seen = new Set<string>();
  const distinct = present.filter((v) => !seen.has(v) && (seen.add(v), true));
  const known = canonical.filter((v) => seen.has(v));
  const rest = distinct.filter((v) => !canonical.includes(v));
  return [...known, ...rest];
}

const PANEL_W = 210;
const PANEL_H = 150;
const GAP_X = 18;
const GAP_Y = 26;
const MARGIN = { left: 78, top: 42, right: 14, bottom: 30 };
const LEGEND_H = 30;

function fmt(v: number): string {
  return Number(v.toFixed(2)).toString();
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function buildSvg(rows: SweepRow[], metrics: Metric[]): string {
  if (metrics.length === 0) {
    throw new Error("no metrics requested");
  }
  const families = orderedBy(FAMILY_ORDER, rows.map((r) => r.family));
  const algorithms = orderedBy(ALGORITHM_ORDER, rows.map((r) => r.algorithm));

  let xMin = Math.min(...rows.map((r) => r.eps));
  let xMax = Math.max(...rows.map((r) => r.eps));
  if (xMax === xMin) {
    xMin -= 0.05;
    xMax += 0.05;
  }
  const sx = (eps: number) => ((eps - xMin) / (xMax - xMin)) * PANEL_W;
  const sy = (v: number) => PANEL_H - Math.min(1, Math.max(0, v)) * PANEL_H;

  const width =
    MARGIN.left + families.length * PANEL_W + (families.length - 1) * GAP_X + MARGIN.right;
  const height =
    MARGIN.top +
    metrics.length * PANEL_H +
    (metrics.length - 1) * GAP_Y +
    MARGIN.bottom +
    LEGEND_H;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `font-family="sans-serif" font-size="11">`
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);

  const yTicks = [0, 0.25, 0.5, 0.75, 1];
  const xTicks = [0, 0.25, 0.5, 0.75, 1].map((f) => xMin + f * (xMax - xMin));

  families.forEach((family, fi) => {
    const px = MARGIN.left + fi * (PANEL_W + GAP_X);
    parts.push(
      `<text x="${px + PANEL_W / 2}" y="${MARGIN.top - 12}" text-anchor="middle" ` +
        `font-weight="bold">${esc(family)}</text>`
    );
    metrics.forEach((metric, mi) => {
      const py = MARGIN.top + mi * (PANEL_H + GAP_Y);
      parts.push(`<g class="panel" transform="translate(${px},${py})">`);
      for (const t of yTicks) {
        parts.push(
          `<line x1="0" y1="${sy(t)}" x2="${PANEL_W}" y2="${sy(t)}" ` +
            `stroke="#ddd" stroke-width="0.6"/>`
        );
        if (fi === 0) {
          parts.push(
            `<text x="-6" y="${sy(t) + 3.5}" text-anchor="end" fill="#444">${fmt(t)}</text>`
          );
        }
      }
      if (mi === metrics.length - 1) {
        for (const t of xTicks) {
          parts.push(
            `<text x="${sx(t)}" y="${PANEL_H + 14}" text-anchor="middle" fill="#444">` +
              `${fmt(t)}</text>`
          );
        }
        parts.push(
          `<text x="${PANEL_W / 2}" y="${PANEL_H + 27}" text-anchor="middle" ` +
            `fill="#222">eps</text>`
        );
      }
      for (const algorithm of algorithms) {
        const pts = rows
          .filter((r) => r.family === family && r.algorithm === algorithm)
          .sort((a, b) => a.eps - b.eps)
          .map((r) => [sx(r.eps), sy(metricValue(r, metric))]);
        if (pts.length === 0) continue;
        const color = colorFor(algorithm);
        if (pts.length === 1) {
          parts.push(
            `<circle class="series" cx="${pts[0][0].toFixed(2)}" ` +
              `cy="${pts[0][1].toFixed(2)}" r="3" fill="${color}"/>`
          );
        } else {
          const d = pts.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
          parts.push(
            `<polyline class="series" points="${d}" fill="none" ` +
              `stroke="${color}" stroke-width="1.6"/>`
          );
        }
      }
      parts.push(
        `<rect width="${PANEL_W}" height="${PANEL_H}" fill="none" stroke="#333" ` +
          `stroke-width="1"/>`
      );
      parts.push(`</g>`);
    });
  });

  metrics.forEach((metric, mi) => {
    const py = MARGIN.top + mi * (PANEL_H + GAP_Y) + PANEL_H / 2;
    parts.push(
      `<text transform="translate(14,${py}) rotate(-90)" text-anchor="middle" ` +
        `font-weight="bold">${esc(METRIC_LABEL[metric])}</text>`
    );
  });

  const legendY = height - LEGEND_H + 8;
  parts.push(`<g class="legend">`);
  let lx = MARGIN.left;
  for (const algorithm of algorithms) {
    parts.push(
      `<line x1="${lx}" y1="${legendY}" x2="${lx + 18}" y2="${legendY}" ` +
        `stroke="${colorFor(algorithm)}" stroke-width="2.5"/>`
    );
    parts.push(
      `<text x="${lx + 22}" y="${legendY + 3.5}" fill="#222">${esc(algorithm)}</text>`
    );
    lx += 30 + algorithm.length * 6.2;
  }
  parts.push(`</g>`);
  parts.push(`</svg>`);
  return parts.join("\n");
}

export function renderFigure(spec: FigureSpec): void {
  const rows = readSweepCsvs(spec.inputCsvPaths);
  const svg = buildSvg(rows, spec.metrics);
  fs.writeFileSync(spec.outputImagePath, svg);
}
