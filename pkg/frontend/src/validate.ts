/** Client-side range checks mirroring the server's parameter invariants.
 *
 * These only gate whether a request is worth sending; the server remains
 * the authority and re-validates everything.
 */

import type { CostParams, Thresholds } from "./types.js";

export interface FieldCheck {
  ok: boolean;
  message?: string;
}

const pass: FieldCheck = { ok: true };

function fail(message: string): FieldCheck {
  return { ok: false, message };
}

function finite(value: number): boolean {
  return typeof value === "number" && Number.isFinite(value);
}

export function checkParamField(field: keyof CostParams, value: number): FieldCheck {
  if (!finite(value)) return fail("must be a finite number");
  switch (field) {
    case "purchase_price":
      return value >= 0 ? pass : fail("must be ≥ 0");
    case "depreciation_years":
      return value > 0 ? pass : fail("must be > 0");
    case "utilization":
      return value > 0 && value <= 1 ? pass : fail("must be in (0, 1]");
    case "avg_power_kw":
      return value >= 0 ? pass : fail("must be ≥ 0");
    case "pue":
      return value >= 1 ? pass : fail("must be ≥ 1");
    case "electricity_price":
      return value >= 0 ? pass : fail("must be ≥ 0");
    case "maintenance_rate":
      return value >= 0 && value <= 1 ? pass : fail("must be in [0, 1]");
    case "fx_cny_per_usd":
      return value > 0 ? pass : fail("must be > 0");
  }
}

export function checkGpuCount(value: number): FieldCheck {
  if (!finite(value) || !Number.isInteger(value)) return fail("must be an integer");
  return value >= 1 ? pass : fail("must be ≥ 1");
}

export function checkThresholdField(field: keyof Thresholds, value: number): FieldCheck {
  if (!finite(value)) return fail("must be a finite number");
  return value > 0 ? pass : fail("must be > 0");
}

export function checkCloudRate(value: number): FieldCheck {
  if (!finite(value)) return fail("must be a finite number");
  return value > 0 ? pass : fail("must be > 0");
}

export function paramsValid(params: CostParams): boolean {
  return (Object.keys(params) as (keyof CostParams)[])
    .every((field) => checkParamField(field, params[field]).ok);
}
