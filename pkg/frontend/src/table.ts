/** View models for the optima table and readouts.
 *
 * Every visible string is taken verbatim from the API's display fields;
 * this module never formats a number the server already formatted.
 */

import type { WhatIfResponse } from "./types.js";

export const OPTIMA_COLUMNS: { key: string; title: string }[] = [
  { key: "model_id", title: "Model" },
  { key: "params_billion", title: "Params (B)" },
  { key: "concurrency", title: "Conc." },
  { key: "total_time_s", title: "Total Time (s)" },
  { key: "avg_ttft_s", title: "Avg. TTFT (s)" },
  { key: "input_tokens", title: "Input Tokens" },
  { key: "output_tokens", title: "Output Tokens" },
  { key: "total_tokens", title: "Total Tokens" },
  { key: "avg_throughput_tok_s", title: "Throughput (tok/s)" },
  { key: "cost_usd", title: "Cost ($)" },
  { key: "quality_score", title: "Score" },
];

export interface OptimaRow {
  modelId: string;
  feasible: boolean;
  onFrontier: boolean;
  cells: string[];
}

export function optimaRows(response: WhatIfResponse): OptimaRow[] {
  return response.rows.map((row) => ({
    modelId: row.model_id,
    feasible: row.feasible,
    onFrontier: row.on_frontier,
    cells: OPTIMA_COLUMNS.map(({ key }) => row.display[key] ?? "-"),
  }));
}

export function frontierModelIds(response: WhatIfResponse): string[] {
  return response.frontier?.points.map((p) => p.model_id) ?? [];
}

export interface RateReadout {
  hourlyRate: string;
  perGpuTotal: string | null;
  breakEven: string | null;
  cloudRate: number | null;
  breaksEven: boolean | null;
}

export function rateReadout(response: WhatIfResponse): RateReadout {
  const cost = response.cost;
  const breakEven = cost?.break_even ?? null;
  return {
    hourlyRate: response.hourly_rate_display,
    perGpuTotal: cost?.display["per_gpu_total"] ?? null,
    breakEven: cost?.display["break_even_utilization"] ?? null,
    cloudRate: breakEven?.cloud_rate_usd_hr ?? null,
    breaksEven: breakEven === null ? null : breakEven.utilization <= 1,
  };
}

export function rowHtml(row: OptimaRow): string {
  const classes = [
    row.onFrontier ? "frontier" : "",
    row.feasible ? "" : "infeasible",
  ].filter(Boolean).join(" ");
  const cells = row.cells.map((cell) => `<td>${escapeHtml(cell)}</td>`).join("");
  const badge = row.onFrontier ? "<td class=\"badge\">frontier</td>" : "<td></td>";
  return `<tr${classes ? ` class="${classes}"` : ""} data-model="${escapeHtml(row.modelId)}">${cells}${badge}</tr>`;
}

export function tableHtml(response: WhatIfResponse): string {
  const head = OPTIMA_COLUMNS.map((c) => `<th>${c.title}</th>`).join("") + "<th></th>";
  const body = optimaRows(response).map(rowHtml).join("");
  return `<table class="optima"><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`;
}

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}
