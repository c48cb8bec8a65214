/** Builds the inline-dataset request payload from uploaded files.
 *
 * File contents travel to the server as raw text; all parsing and
 * validation happen there so error rows/fields come back from the one
 * authoritative parser.
 */

import type { InlineDataset } from "./types.js";

export function formatForName(name: string): "csv" | "json" {
  return name.toLowerCase().endsWith(".csv") ? "csv" : "json";
}

export function datasetFromUpload(
  runs: { name: string; text: string },
  scores?: { name: string; text: string },
): InlineDataset {
  const dataset: InlineDataset = {
    format: formatForName(runs.name),
    content: runs.text,
  };
  if (scores) {
    dataset.scores_format = formatForName(scores.name);
    dataset.scores_content = scores.text;
  }
  return dataset;
}
