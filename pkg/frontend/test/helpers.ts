import type { OptimalChoice, ParetoPoint, ReportRow, WhatIfResponse } from "../src/types";

export function row(modelId: string, overrides: Partial<ReportRow> = {}): ReportRow {
  return {
    model_id: modelId,
    params_billion: 30,
    quality_score: 70,
    feasible: true,
    on_frontier: false,
    concurrency: 16,
    total_time_s: 830.37,
    avg_ttft_s: 0.156,
    input_tokens: 1347535,
    output_tokens: 345306,
    total_tokens: 1692841,
    avg_throughput_tok_s: 25.99,
    cost_usd: 0.3644,
    display: {
      model_id: modelId,
      params_billion: "30",
      concurrency: "16",
      total_time_s: "830.37",
      avg_ttft_s: "0.156",
      input_tokens: "1347535",
      output_tokens: "345306",
      total_tokens: "1692841",
      avg_throughput_tok_s: "25.99",
      cost_usd: "0.36",
      quality_score: "70",
      on_frontier: "no",
      feasible: "yes",
    },
    ...overrides,
  };
}

export function point(modelId: string, cost: number, quality: number, params = 30): ParetoPoint {
  return { model_id: modelId, cost_usd: cost, quality, params_billion: params };
}

export function choice(modelId: string, concurrency: number): OptimalChoice {
  return {
    model_id: modelId,
    feasible: true,
    concurrency,
    run: null,
    cost_usd: 0.5,
    rejected: [],
  };
}

export function makeResponse(overrides: Partial<WhatIfResponse> = {}): WhatIfResponse {
  const frontierPoints = [point("cheap", 0.11, 56.4, 20), point("leader", 0.34, 76.2, 30)];
  const dominated = [point("middling", 0.36, 65.5, 32)];
  return {
    hourly_rate_usd: 1.58,
    hourly_rate_display: "1.58",
    thresholds: { max_ttft_s: 1, min_throughput_tok_s: 20 },
    dataset_id: "wineval3",
    optima: [choice("leader", 48), choice("middling", 16), choice("cheap", 64)],
    frontier: {
      points: frontierPoints,
      dominated: dominated.map((p) => ({ point: p, dominated_by: "leader" })),
    },
    rows: [
      row("leader", { on_frontier: true, quality_score: 76.2 }),
      row("middling", { quality_score: 65.5 }),
      row("cheap", { on_frontier: true, quality_score: 56.4 }),
    ],
    cost: {
      per_gpu: {
        depreciation_usd_hr: 0.644,
        power_usd_hr: 0.0846,
        maintenance_usd_hr: 0.058,
        total_usd_hr: 0.7866,
        at_utilization: 1,
      },
      gpu_count: 2,
      cluster_hourly_usd: 1.5733,
      reference_rate_usd: 1.58,
      break_even: { cloud_rate_usd_hr: 4.8, utilization: 0.1639 },
      display: {
        per_gpu_total: "0.79",
        cluster_hourly_usd: "1.57",
        reference_rate_usd: "1.58",
        break_even_utilization: "16.4%",
      },
    },
    ...overrides,
  };
}
