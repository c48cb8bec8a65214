/** Explorer state and its pure transitions.
 *
 * Invariants the view relies on:
 *  - `applied` always holds the controls the last rendered result was
 *    computed from; inputs render `controls`, results render `applied`.
 *  - while a request is pending the previous result stays visible but is
 *    flagged stale.
 *  - responses carry the sequence number of their request; anything older
 *    than the newest issued request is dropped (latest wins).
 */

import type { CostParams, DatasetSelection, Thresholds, WhatIfResponse } from "./types.js";

export interface Controls {
  params: CostParams;
  gpuCount: number;
  thresholds: Thresholds;
  cloudRate: number;
}

export interface ExplorerState {
  controls: Controls;
  applied: Controls | null;
  dataset: DatasetSelection;
  datasetLabel: string;
  response: WhatIfResponse | null;
  pending: boolean;
  requestSeq: number;
  error: string | null;
}

/** Mirrors the server-side defaults (reference card parameters, dual-GPU box,
 * interactive service thresholds, a mid-range cloud rate to compare against). */
export function defaultControls(): Controls {
  return {
    params: {
      purchase_price: 120000,
      depreciation_years: 3,
      utilization: 1.0,
      avg_power_kw: 0.4,
      pue: 1.5,
      electricity_price: 1.0,
      maintenance_rate: 0.03,
      fx_cny_per_usd: 7.09,
    },
    gpuCount: 2,
    thresholds: { max_ttft_s: 1.0, min_throughput_tok_s: 20.0 },
    cloudRate: 4.8,
  };
}

export function initialState(): ExplorerState {
  return {
    controls: defaultControls(),
    applied: null,
    dataset: "fixture",
    datasetLabel: "reference dataset",
    response: null,
    pending: false,
    requestSeq: 0,
    error: null,
  };
}

export function cloneControls(controls: Controls): Controls {
  return {
    params: { ...controls.params },
    gpuCount: controls.gpuCount,
    thresholds: { ...controls.thresholds },
    cloudRate: controls.cloudRate,
  };
}

export function setControl(state: ExplorerState, update: Partial<Controls>): ExplorerState {
  return { ...state, controls: { ...cloneControls(state.controls), ...update } };
}

export function setDataset(state: ExplorerState, dataset: DatasetSelection, label: string): ExplorerState {
  return { ...state, dataset, datasetLabel: label };
}

/** A request is going out: bump the sequence and flag the view stale. */
export function beginRequest(state: ExplorerState): { state: ExplorerState; seq: number } {
  const seq = state.requestSeq + 1;
  return { state: { ...state, requestSeq: seq, pending: true, error: null }, seq };
}

/** Apply a response if it is still the newest request; drop it otherwise. */
export function applyResponse(
  state: ExplorerState,
  seq: number,
  computedFrom: Controls,
  response: WhatIfResponse,
): ExplorerState {
  if (seq !== state.requestSeq) return state;
  return {
    ...state,
    pending: false,
    error: null,
    response,
    applied: cloneControls(computedFrom),
  };
}

/** Record a failure for the newest request; the previous result stays. */
export function applyError(state: ExplorerState, seq: number, message: string): ExplorerState {
  if (seq !== state.requestSeq) return state;
  return { ...state, pending: false, error: message };
}

/** The rendered result no longer matches the inputs (or one is in flight). */
export function isStale(state: ExplorerState): boolean {
  if (state.pending) return true;
  if (state.applied === null) return state.response !== null;
  return JSON.stringify(state.applied) !== JSON.stringify(state.controls);
}
