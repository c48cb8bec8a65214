/** Thin fetch client for the infercost API. At most one what-if request is
 * in flight; issuing a new one aborts its predecessor (latest wins). */

import type { ApiErrorBody, WhatIfRequest, WhatIfResponse } from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly body: ApiErrorBody | null,
  ) {
    super(message);
  }

  /** The control the server blamed, when it named one. */
  get field(): string | null {
    return this.body?.error.field ?? null;
  }
}

export function describeApiError(error: ApiError): string {
  const body = error.body;
  if (!body) return error.message;
  const failures = body.error.failures;
  if (failures && failures.length > 0) {
    const head = failures.slice(0, 3).map((f) => {
      const where = f.row !== null ? `row ${f.row}` : "file";
      const field = f.field ? `, ${f.field}` : "";
      return `${where}${field}: ${f.message}`;
    });
    const more = failures.length > 3 ? ` (+${failures.length - 3} more)` : "";
    return `${head.join("; ")}${more}`;
  }
  return body.error.message;
}

export class ApiClient {
  private inFlight: AbortController | null = null;

  constructor(private readonly base: string = "") {}

  async whatIf(body: WhatIfRequest, fetchImpl: typeof fetch = fetch): Promise<WhatIfResponse> {
    this.inFlight?.abort();
    const controller = new AbortController();
    this.inFlight = controller;
    try {
      const response = await fetchImpl(`${this.base}/api/whatif`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
        signal: controller.signal,
      });
      if (!response.ok) {
        let parsed: ApiErrorBody | null = null;
        try {
          parsed = (await response.json()) as ApiErrorBody;
        } catch {
          parsed = null;
        }
        throw new ApiError(parsed?.error.message ?? `HTTP ${response.status}`, response.status, parsed);
      }
      return (await response.json()) as WhatIfResponse;
    } finally {
      if (this.inFlight === controller) this.inFlight = null;
    }
  }

  async fixtureDataset(fetchImpl: typeof fetch = fetch): Promise<unknown> {
    const response = await fetchImpl(`${this.base}/api/datasets/wineval3`);
    if (!response.ok) throw new ApiError(`HTTP ${response.status}`, response.status, null);
    return response.json();
  }
}

/** Trailing-edge debounce used for slider drags. */
export function debounce<A extends unknown[]>(fn: (...args: A) => void, waitMs: number): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | null = null;
  return (...args: A) => {
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      fn(...args);
    }, waitMs);
  };
}
