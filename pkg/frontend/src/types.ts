/** Wire types mirroring the infercost HTTP API. */

export interface CostParams {
  purchase_price: number;
  depreciation_years: number;
  utilization: number;
  avg_power_kw: number;
  pue: number;
  electricity_price: number;
  maintenance_rate: number;
  fx_cny_per_usd: number;
}

export interface Thresholds {
  max_ttft_s: number;
  min_throughput_tok_s: number;
}

export interface BenchRun {
  model_id: string;
  concurrency: number;
  request_count: number;
  total_time_s: number;
  avg_ttft_s: number;
  input_tokens: number;
  output_tokens: number;
  total_tokens: number;
  avg_throughput_tok_s: number;
  cost_usd: number | null;
}

export interface RejectedLevel {
  concurrency: number;
  reasons: string[];
}

export interface OptimalChoice {
  model_id: string;
  feasible: boolean;
  concurrency: number | null;
  run: BenchRun | null;
  cost_usd: number | null;
  rejected: RejectedLevel[];
}

export interface ParetoPoint {
  model_id: string;
  cost_usd: number;
  quality: number;
  params_billion: number;
}

export interface Frontier {
  points: ParetoPoint[];
  dominated: { point: ParetoPoint; dominated_by: string }[];
}

export interface ReportRow {
  model_id: string;
  params_billion: number;
  quality_score: number;
  feasible: boolean;
  on_frontier: boolean;
  concurrency: number | null;
  total_time_s: number | null;
  avg_ttft_s: number | null;
  input_tokens: number | null;
  output_tokens: number | null;
  total_tokens: number | null;
  avg_throughput_tok_s: number | null;
  cost_usd: number | null;
  display: Record<string, string>;
}

export interface GpuBreakdown {
  depreciation_usd_hr: number;
  power_usd_hr: number;
  maintenance_usd_hr: number;
  total_usd_hr: number;
  at_utilization: number;
}

export interface CostBlock {
  per_gpu: GpuBreakdown;
  gpu_count: number;
  cluster_hourly_usd: number;
  reference_rate_usd: number;
  break_even: { cloud_rate_usd_hr: number; utilization: number } | null;
  display: Record<string, string>;
}

export interface WhatIfResponse {
  hourly_rate_usd: number;
  hourly_rate_display: string;
  thresholds: Thresholds;
  dataset_id: string;
  optima: OptimalChoice[];
  frontier: Frontier | null;
  rows: ReportRow[];
  cost?: CostBlock;
}

/** Raw uploaded documents are parsed and validated server-side. */
export interface InlineDataset {
  format: "csv" | "json";
  content: string;
  scores_format?: "csv" | "json";
  scores_content?: string;
}

export type DatasetSelection = "fixture" | InlineDataset;

export interface WhatIfRequest {
  cost_params: CostParams;
  gpu_count: number;
  thresholds: Thresholds;
  dataset: DatasetSelection;
  cloud_rate_usd_hr?: number;
}

export interface ApiErrorBody {
  error: {
    message: string;
    field?: string | null;
    model_id?: string;
    failures?: { row: number | null; field: string | null; message: string }[];
  };
}
