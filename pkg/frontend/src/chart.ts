/** Frontier bubble chart as an SVG string.
 *
 * Purely presentational: which points exist, their coordinates, and who is
 * on the frontier all come from the API response. The chart only maps
 * values to pixels.
 */

import type { ParetoPoint, WhatIfResponse } from "./types.js";
import { escapeHtml } from "./table.js";

export interface ChartOptions {
  width: number;
  height: number;
  logX: boolean;
  sweetSpotUsd: number | null;
}

export const DEFAULT_CHART: ChartOptions = {
  width: 860,
  height: 520,
  logX: false,
  sweetSpotUsd: 1.4,
};

const MARGIN = { left: 64, right: 28, top: 44, bottom: 52 };

function pad(lo: number, hi: number): [number, number] {
  if (hi > lo) {
    const p = 0.05 * (hi - lo);
    return [lo - p, hi + p];
  }
  const p = lo !== 0 ? 0.05 * Math.abs(lo) : 0.5;
  return [lo - p, lo + p];
}

function ticks(lo: number, hi: number, count = 5): number[] {
  return Array.from({ length: count }, (_, i) => lo + ((hi - lo) * i) / (count - 1));
}

function fmtTick(value: number): string {
  if (Math.abs(value) >= 100) return value.toFixed(0);
  if (Math.abs(value) >= 1) return trim(value.toFixed(2));
  return trim(value.toFixed(3));
}

function trim(text: string): string {
  return text.replace(/\.?0+$/, "");
}

function n(value: number): string {
  return value.toFixed(2);
}

export function allPoints(response: WhatIfResponse): ParetoPoint[] {
  const frontier = response.frontier;
  if (!frontier) return [];
  return [...frontier.points, ...frontier.dominated.map((d) => d.point)];
}

export function renderChartSvg(response: WhatIfResponse, options: ChartOptions = DEFAULT_CHART): string {
  const points = allPoints(response);
  if (points.length === 0) {
    return `<svg xmlns="http://www.w3.org/2000/svg" width="${options.width}" height="${options.height}"><text x="20" y="40">no feasible configuration</text></svg>`;
  }
  const members = new Set(response.frontier!.points.map((p) => p.model_id));
  const tx = (cost: number) => (options.logX ? Math.log10(cost) : cost);

  const [xLo, xHi] = pad(Math.min(...points.map((p) => tx(p.cost_usd))), Math.max(...points.map((p) => tx(p.cost_usd))));
  const [yLo, yHi] = pad(Math.min(...points.map((p) => p.quality)), Math.max(...points.map((p) => p.quality)));
  const plotW = options.width - MARGIN.left - MARGIN.right;
  const plotH = options.height - MARGIN.top - MARGIN.bottom;
  const sx = (cost: number) => MARGIN.left + ((tx(cost) - xLo) / (xHi - xLo)) * plotW;
  const sy = (quality: number) => MARGIN.top + ((yHi - quality) / (yHi - yLo)) * plotH;

  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${options.width} ${options.height}" class="frontier-chart">`,
    `<rect width="${options.width}" height="${options.height}" class="bg"/>`,
  ];

  if (options.sweetSpotUsd !== null && tx(options.sweetSpotUsd) > xLo) {
    const right = Math.min(tx(options.sweetSpotUsd), xHi);
    const xRight = MARGIN.left + ((right - xLo) / (xHi - xLo)) * plotW;
    parts.push(`<rect class="band" x="${n(MARGIN.left)}" y="${n(MARGIN.top)}" width="${n(xRight - MARGIN.left)}" height="${n(plotH)}"/>`);
    if (right < xHi) {
      parts.push(`<line class="band-edge" x1="${n(xRight)}" y1="${n(MARGIN.top)}" x2="${n(xRight)}" y2="${n(MARGIN.top + plotH)}"/>`);
    }
  }

  const axisY = MARGIN.top + plotH;
  for (const raw of ticks(xLo, xHi)) {
    const x = MARGIN.left + ((raw - xLo) / (xHi - xLo)) * plotW;
    const label = fmtTick(options.logX ? 10 ** raw : raw);
    parts.push(`<line class="grid" x1="${n(x)}" y1="${n(MARGIN.top)}" x2="${n(x)}" y2="${n(axisY)}"/>`);
    parts.push(`<text class="tick" x="${n(x - 10)}" y="${n(axisY + 18)}">${label}</text>`);
  }
  for (const raw of ticks(yLo, yHi)) {
    const y = MARGIN.top + ((yHi - raw) / (yHi - yLo)) * plotH;
    parts.push(`<line class="grid" x1="${n(MARGIN.left)}" y1="${n(y)}" x2="${n(MARGIN.left + plotW)}" y2="${n(y)}"/>`);
    parts.push(`<text class="tick" x="${n(MARGIN.left - 36)}" y="${n(y + 4)}">${fmtTick(raw)}</text>`);
  }
  parts.push(`<line class="axis" x1="${n(MARGIN.left)}" y1="${n(MARGIN.top)}" x2="${n(MARGIN.left)}" y2="${n(axisY)}"/>`);
  parts.push(`<line class="axis" x1="${n(MARGIN.left)}" y1="${n(axisY)}" x2="${n(MARGIN.left + plotW)}" y2="${n(axisY)}"/>`);
  parts.push(`<text class="label" x="${n(MARGIN.left + plotW / 2 - 40)}" y="${n(options.height - 12)}">cost (USD)</text>`);
  parts.push(`<text class="label" transform="rotate(-90 16 ${n(MARGIN.top + plotH / 2)})" x="16" y="${n(MARGIN.top + plotH / 2)}">quality score</text>`);

  const stairs = response.frontier!.points
    .slice()
    .sort((a, b) => a.cost_usd - b.cost_usd || a.quality - b.quality);
  if (stairs.length > 0) {
    const d: string[] = [`M${n(sx(stairs[0].cost_usd))} ${n(sy(stairs[0].quality))}`];
    for (let i = 1; i < stairs.length; i += 1) {
      d.push(`H${n(sx(stairs[i].cost_usd))}`);
      d.push(`V${n(sy(stairs[i].quality))}`);
    }
    parts.push(`<path class="stair" d="${d.join(" ")}"/>`);
  }

  const ordered = points.slice().sort((a, b) => a.cost_usd - b.cost_usd || a.quality - b.quality);
  for (const point of ordered) {
    const kind = members.has(point.model_id) ? "frontier" : "dominated";
    const radius = 2.2 * Math.sqrt(point.params_billion);
    const x = sx(point.cost_usd);
    const y = sy(point.quality);
    parts.push(`<circle class="pt ${kind}" cx="${n(x)}" cy="${n(y)}" r="${n(radius)}"><title>${escapeHtml(point.model_id)}</title></circle>`);
    parts.push(`<text class="pt-label" x="${n(x + radius + 4)}" y="${n(y + 4)}">${escapeHtml(point.model_id)}</text>`);
  }

  parts.push("</svg>");
  return parts.join("\n");
}
