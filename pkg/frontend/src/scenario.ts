/** Scenario save/restore as local JSON documents (no server storage). */

import type { Controls } from "./state.js";
import { checkGpuCount, checkParamField, checkThresholdField } from "./validate.js";
import type { CostParams, Thresholds } from "./types.js";

const VERSION = 1;

export function exportScenario(controls: Controls): string {
  return JSON.stringify({ version: VERSION, controls }, null, 2);
}

export function importScenario(text: string): Controls {
  let parsed: unknown;
  try {
    parsed = JSON.parse(text);
  } catch {
    throw new Error("scenario file is not valid JSON");
  }
  const doc = parsed as { version?: number; controls?: Partial<Controls> };
  if (doc.version !== VERSION || !doc.controls) {
    throw new Error("not a scenario file (missing version/controls)");
  }
  const { params, gpuCount, thresholds, cloudRate } = doc.controls;
  if (!params || !thresholds || gpuCount === undefined || cloudRate === undefined) {
    throw new Error("scenario file is missing fields");
  }
  for (const field of Object.keys(params) as (keyof CostParams)[]) {
    const check = checkParamField(field, params[field] as number);
    if (!check.ok) throw new Error(`scenario ${field}: ${check.message}`);
  }
  if (!checkGpuCount(gpuCount).ok) throw new Error("scenario gpuCount is invalid");
  for (const field of Object.keys(thresholds) as (keyof Thresholds)[]) {
    const check = checkThresholdField(field, thresholds[field] as number);
    if (!check.ok) throw new Error(`scenario ${field}: ${check.message}`);
  }
  return {
    params: params as CostParams,
    gpuCount,
    thresholds: thresholds as Thresholds,
    cloudRate,
  };
}
