/** Lower grid-loading envelope: rows no worse than the reference on every
 * grid metric. Direction-of-good comes from the bundle metadata, never from
 * hard-coded metric names. */

import type { UiDecisionSpace, UiRow } from "./types.js";

function gridValues(space: UiDecisionSpace, row: UiRow): number[] | null {
  const out: number[] = [];
  for (const name of space.gridMetricNames) {
    const v = row[name];
    if (typeof v !== "number") return null; // unassessed row
    out.push(v);
  }
  return out;
}

export function lowerEnvelope(
  space: UiDecisionSpace,
  referenceId = "least_cost",
): Set<string> {
  const ref = space.rows.find((r) => r.id === referenceId);
  if (ref === undefined) throw new Error(`reference row '${referenceId}' not found`);
  const refVals = gridValues(space, ref);
  if (refVals === null) {
    throw new Error(`reference row '${referenceId}' has no grid metrics`);
  }
  const out = new Set<string>();
  for (const row of space.rows) {
    const vals = gridValues(space, row);
    if (vals === null) continue;
    const dominates = vals.every((v, i) => {
      const meta = space.metrics[space.gridMetricNames[i]!];
      const good = meta?.good ?? "lower";
      return good === "lower" ? v <= refVals[i]! : v >= refVals[i]!;
    });
    if (dominates) out.add(row.id);
  }
  return out;
}
