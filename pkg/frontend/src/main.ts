/** DOM wiring for the what-if explorer. All economics are server-side;
 * this file moves values between controls and the API client. */

import { ApiClient, ApiError, debounce, describeApiError } from "./api.js";
import { DEFAULT_CHART, renderChartSvg } from "./chart.js";
import { exportScenario, importScenario } from "./scenario.js";
import {
  Controls,
  ExplorerState,
  applyError,
  applyResponse,
  beginRequest,
  cloneControls,
  initialState,
  isStale,
  setDataset,
} from "./state.js";
import { rateReadout, tableHtml } from "./table.js";
import type { CostParams, Thresholds, WhatIfRequest } from "./types.js";
import { datasetFromUpload } from "./upload.js";
import { checkCloudRate, checkGpuCount, checkParamField, checkThresholdField } from "./validate.js";

type ParamField = keyof CostParams;
type ThresholdField = keyof Thresholds;

interface ControlSpec {
  kind: "param" | "threshold" | "gpus" | "cloud";
  field: string;
  label: string;
  min: number;
  max: number;
  step: number;
}

const CONTROL_SPECS: ControlSpec[] = [
  { kind: "param", field: "purchase_price", label: "GPU price (CNY)", min: 0, max: 400000, step: 1000 },
  { kind: "param", field: "depreciation_years", label: "Depreciation (years)", min: 0.5, max: 10, step: 0.5 },
  { kind: "param", field: "utilization", label: "Utilization (0-1)", min: 0.05, max: 1, step: 0.05 },
  { kind: "param", field: "avg_power_kw", label: "Power (kW)", min: 0, max: 2, step: 0.05 },
  { kind: "param", field: "pue", label: "PUE", min: 1, max: 3, step: 0.05 },
  { kind: "param", field: "electricity_price", label: "Electricity (CNY/kWh)", min: 0, max: 5, step: 0.1 },
  { kind: "param", field: "maintenance_rate", label: "Maintenance (annual)", min: 0, max: 0.2, step: 0.005 },
  { kind: "param", field: "fx_cny_per_usd", label: "FX (CNY per USD)", min: 1, max: 20, step: 0.01 },
  { kind: "gpus", field: "gpu_count", label: "GPUs", min: 1, max: 16, step: 1 },
  { kind: "threshold", field: "max_ttft_s", label: "Max TTFT (s)", min: 0.05, max: 10, step: 0.05 },
  { kind: "threshold", field: "min_throughput_tok_s", label: "Min throughput (tok/s)", min: 1, max: 100, step: 1 },
  { kind: "cloud", field: "cloud_rate_usd_hr", label: "Cloud rate (USD/hr)", min: 0.5, max: 12, step: 0.1 },
];

const client = new ApiClient("");
let state: ExplorerState = initialState();
let logX = false;

const $ = <T extends HTMLElement>(selector: string): T => {
  const el = document.querySelector<T>(selector);
  if (!el) throw new Error(`missing element ${selector}`);
  return el;
};

function controlValue(controls: Controls, spec: ControlSpec): number {
  switch (spec.kind) {
    case "param": return controls.params[spec.field as ParamField];
    case "threshold": return controls.thresholds[spec.field as ThresholdField];
    case "gpus": return controls.gpuCount;
    case "cloud": return controls.cloudRate;
  }
}

function withControl(controls: Controls, spec: ControlSpec, value: number): Controls {
  const next = cloneControls(controls);
  switch (spec.kind) {
    case "param": next.params[spec.field as ParamField] = value; break;
    case "threshold": next.thresholds[spec.field as ThresholdField] = value; break;
    case "gpus": next.gpuCount = value; break;
    case "cloud": next.cloudRate = value; break;
  }
  return next;
}

function checkControl(spec: ControlSpec, value: number): { ok: boolean; message?: string } {
  switch (spec.kind) {
    case "param": return checkParamField(spec.field as ParamField, value);
    case "threshold": return checkThresholdField(spec.field as ThresholdField, value);
    case "gpus": return checkGpuCount(value);
    case "cloud": return checkCloudRate(value);
  }
}

function requestBody(): WhatIfRequest {
  return {
    cost_params: { ...state.controls.params },
    gpu_count: state.controls.gpuCount,
    thresholds: { ...state.controls.thresholds },
    dataset: state.dataset,
    cloud_rate_usd_hr: state.controls.cloudRate,
  };
}

async function refresh(): Promise<void> {
  const { state: next, seq } = beginRequest(state);
  state = next;
  renderStatus();
  const computedFrom = cloneControls(state.controls);
  try {
    const response = await client.whatIf(requestBody());
    state = applyResponse(state, seq, computedFrom, response);
    renderAll();
  } catch (error) {
    if (error instanceof DOMException && error.name === "AbortError") return; // superseded
    if (error instanceof ApiError) {
      state = applyError(state, seq, describeApiError(error));
      renderAll();
      if (error.field) flagField(error.field, describeApiError(error));
    } else {
      state = applyError(state, seq, "network failure; check the server and retry");
      renderAll();
      $("#retry").classList.remove("hidden");
    }
  }
}

const debouncedRefresh = debounce(() => void refresh(), 200);

function flagField(field: string, message: string): void {
  const note = document.querySelector<HTMLElement>(`[data-error-for="${field}"]`);
  if (note) {
    note.textContent = message;
    note.classList.remove("hidden");
  }
}

function clearFieldFlags(): void {
  document.querySelectorAll<HTMLElement>("[data-error-for]").forEach((el) => {
    el.textContent = "";
    el.classList.add("hidden");
  });
}

function buildControls(): void {
  const host = $("#controls");
  for (const spec of CONTROL_SPECS) {
    const row = document.createElement("div");
    row.className = "control";
    row.innerHTML = `
      <label for="in-${spec.field}">${spec.label}</label>
      <input type="range" id="sl-${spec.field}" min="${spec.min}" max="${spec.max}" step="${spec.step}">
      <input type="number" id="in-${spec.field}" min="${spec.min}" step="${spec.step}">
      <span class="field-error hidden" data-error-for="${spec.field}"></span>`;
    host.appendChild(row);
    const slider = row.querySelector<HTMLInputElement>(`#sl-${spec.field}`)!;
    const box = row.querySelector<HTMLInputElement>(`#in-${spec.field}`)!;

    const onEdit = (raw: string) => {
      const value = Number(raw);
      clearFieldFlags();
      const check = checkControl(spec, value);
      if (!check.ok) {
        flagField(spec.field, check.message ?? "invalid");
        return; // no request for invalid input
      }
      state = { ...state, controls: withControl(state.controls, spec, value) };
      slider.value = String(value);
      box.value = String(value);
      renderStatus();
      debouncedRefresh();
    };
    slider.addEventListener("input", () => onEdit(slider.value));
    box.addEventListener("change", () => onEdit(box.value));
  }
  syncControls();
}

function syncControls(): void {
  for (const spec of CONTROL_SPECS) {
    const value = controlValue(state.controls, spec);
    const slider = document.querySelector<HTMLInputElement>(`#sl-${spec.field}`);
    const box = document.querySelector<HTMLInputElement>(`#in-${spec.field}`);
    if (slider) slider.value = String(value);
    if (box) box.value = String(value);
  }
}

function renderStatus(): void {
  const status = $("#status");
  const results = $("#results");
  if (state.pending) {
    status.textContent = "computing…";
  } else if (state.error) {
    status.textContent = state.error;
  } else {
    status.textContent = `dataset: ${state.datasetLabel}`;
  }
  results.classList.toggle("stale", isStale(state));
  $("#error-banner").classList.toggle("hidden", state.error === null);
  $("#error-banner-text").textContent = state.error ?? "";
}

function renderAll(): void {
  renderStatus();
  const response = state.response;
  if (!response) return;
  $("#table-host").innerHTML = tableHtml(response);
  $("#chart-host").innerHTML = renderChartSvg(response, { ...DEFAULT_CHART, logX });

  const readout = rateReadout(response);
  $("#rate-value").textContent = `$${readout.hourlyRate}/hr`;
  $("#per-gpu-value").textContent = readout.perGpuTotal ? `$${readout.perGpuTotal}/hr per GPU` : "";
  if (readout.breakEven !== null) {
    const verdict = readout.breaksEven
      ? "self-hosting breaks even above"
      : "self-hosting never breaks even (needs";
    const suffix = readout.breaksEven ? "" : " utilization)";
    $("#break-even-value").textContent =
      `${verdict} ${readout.breakEven}${suffix} vs $${readout.cloudRate}/hr cloud`;
  } else {
    $("#break-even-value").textContent = "";
  }
}

function wireDatasetControls(): void {
  const runsInput = $("#runs-file") as HTMLInputElement;
  const scoresInput = $("#scores-file") as HTMLInputElement;
  $("#use-upload").addEventListener("click", async () => {
    const runsFile = runsInput.files?.[0];
    if (!runsFile) {
      flagField("dataset", "choose a run file first");
      return;
    }
    const scoresFile = scoresInput.files?.[0];
    const runs = { name: runsFile.name, text: await runsFile.text() };
    const scores = scoresFile ? { name: scoresFile.name, text: await scoresFile.text() } : undefined;
    state = setDataset(state, datasetFromUpload(runs, scores), runsFile.name);
    void refresh();
  });
  $("#use-fixture").addEventListener("click", () => {
    state = setDataset(state, "fixture", "reference dataset");
    void refresh();
  });
}

function wireScenarioControls(): void {
  $("#export-scenario").addEventListener("click", () => {
    const blob = new Blob([exportScenario(state.controls)], { type: "application/json" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "scenario.json";
    link.click();
    URL.revokeObjectURL(link.href);
  });
  const input = $("#import-scenario-file") as HTMLInputElement;
  $("#import-scenario").addEventListener("click", () => input.click());
  input.addEventListener("change", async () => {
    const file = input.files?.[0];
    if (!file) return;
    try {
      state = { ...state, controls: importScenario(await file.text()) };
      syncControls();
      void refresh();
    } catch (error) {
      flagField("dataset", error instanceof Error ? error.message : String(error));
    }
  });
}

function init(): void {
  buildControls();
  wireDatasetControls();
  wireScenarioControls();
  $("#retry").addEventListener("click", () => {
    $("#retry").classList.add("hidden");
    void refresh();
  });
  $("#log-toggle").addEventListener("change", (event) => {
    logX = (event.target as HTMLInputElement).checked;
    renderAll();
  });
  void refresh();
}

document.addEventListener("DOMContentLoaded", init);
