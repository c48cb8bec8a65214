import { describe, expect, it } from "vitest";

import { OPTIMA_COLUMNS, frontierModelIds, optimaRows, rateReadout, tableHtml } from "../src/table";
import { makeResponse, row } from "./helpers";

describe("optima rows", () => {
  it("takes every cell verbatim from the API display block", () => {
    const response = makeResponse();
    const rows = optimaRows(response);
    expect(rows).toHaveLength(3);
    for (const [index, viewRow] of rows.entries()) {
      const apiRow = response.rows[index];
      for (const [column, cell] of OPTIMA_COLUMNS.map((c, i) => [c.key, viewRow.cells[i]] as const)) {
        expect(cell).toBe(apiRow.display[column]);
      }
    }
  });

  it("never re-formats: a deliberately odd display string passes through", () => {
    const response = makeResponse({
      rows: [row("odd", { display: { ...row("odd").display, cost_usd: "0.3400000" } })],
    });
    const rows = optimaRows(response);
    const costIndex = OPTIMA_COLUMNS.findIndex((c) => c.key === "cost_usd");
    expect(rows[0].cells[costIndex]).toBe("0.3400000");
  });

  it("marks frontier and infeasible rows", () => {
    const rows = optimaRows(makeResponse());
    expect(rows.find((r) => r.modelId === "leader")?.onFrontier).toBe(true);
    expect(rows.find((r) => r.modelId === "middling")?.onFrontier).toBe(false);
  });

  it("missing display keys render as a dash", () => {
    const response = makeResponse({ rows: [row("sparse", { display: { model_id: "sparse" } })] });
    const rows = optimaRows(response);
    expect(rows[0].cells[0]).toBe("sparse");
    expect(rows[0].cells[1]).toBe("-");
  });
});

describe("table html", () => {
  it("renders one row per model with the frontier badge", () => {
    const html = tableHtml(makeResponse());
    expect(html.match(/<tr /g)?.length ?? 0).toBe(3);
    expect(html.match(/class="badge"/g)?.length ?? 0).toBe(2);
    expect(html).toContain('data-model="leader"');
  });

  it("escapes markup in model ids", () => {
    const response = makeResponse({
      rows: [row('<img src=x onerror="x">', {
        display: { ...row("x").display, model_id: '<img src=x onerror="x">' },
      })],
    });
    const html = tableHtml(response);
    expect(html).not.toContain("<img");
    expect(html).toContain("&lt;img");
  });
});

describe("frontier ids and readouts", () => {
  it("frontier ids come straight from the response", () => {
    expect(frontierModelIds(makeResponse())).toEqual(["cheap", "leader"]);
  });

  it("rate readout uses API display strings byte for byte", () => {
    const readout = rateReadout(makeResponse());
    expect(readout.hourlyRate).toBe("1.58");
    expect(readout.perGpuTotal).toBe("0.79");
    expect(readout.breakEven).toBe("16.4%");
    expect(readout.breaksEven).toBe(true);
  });

  it("handles a missing cost block", () => {
    const readout = rateReadout(makeResponse({ cost: undefined }));
    expect(readout.perGpuTotal).toBeNull();
    expect(readout.breakEven).toBeNull();
    expect(readout.breaksEven).toBeNull();
  });

  it("flags rates that never break even", () => {
    const response = makeResponse();
    response.cost!.break_even = { cloud_rate_usd_hr: 0.5, utilization: 1.57 };
    expect(rateReadout(response).breaksEven).toBe(false);
  });
});
