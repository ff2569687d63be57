/** Detail panel data: capacity mix, cost, and grid-metric deltas vs benchmarks. */

import type { UiDecisionSpace, UiRow } from "./types.js";

/** Aggregate capacity columns derived from individual kinds (not plotted twice). */
const AGGREGATE_CAPACITIES = new Set([
  "capacity_p2h_mw",
  "capacity_gas_mw",
  "capacity_nondispatchable_mw",
]);

export interface CapacityEntry {
  kind: string;
  mw: number;
}

export interface MetricDelta {
  metric: string;
  value: number | null;
  /** row minus benchmark; negative is an improvement for good=lower metrics. */
  deltas: Record<string, number | null>;
}

export interface SporeDetail {
  id: string;
  kind: "spore" | "benchmark";
  costEur: number;
  lcohEurPerMwh: number | null;
  capacities: CapacityEntry[];
  gridDeltas: MetricDelta[];
}

export function inspectSpore(space: UiDecisionSpace, id: string): SporeDetail {
  const row = space.rows.find((r) => r.id === id);
  if (row === undefined) throw new Error(`row '${id}' not in the loaded space`);
  const capacities: CapacityEntry[] = [];
  for (const [field, value] of Object.entries(row)) {
    if (!field.startsWith("capacity_") || !field.endsWith("_mw")) continue;
    if (AGGREGATE_CAPACITIES.has(field)) continue;
    if (typeof value === "number" && value > 1e-9) {
      capacities.push({ kind: field.slice("capacity_".length, -"_mw".length), mw: value });
    }
  }
  capacities.sort((a, b) => b.mw - a.mw);

  const benchRows = space.benchmarks
    .map((b) => space.rows.find((r) => r.id === b))
    .filter((r): r is UiRow => r !== undefined);
  const gridDeltas: MetricDelta[] = space.gridMetricNames.map((metric) => {
    const v = row[metric];
    const value = typeof v === "number" ? v : null;
    const deltas: Record<string, number | null> = {};
    for (const bench of benchRows) {
      const bv = bench[metric];
      deltas[bench.id] =
        value !== null && typeof bv === "number" ? value - bv : null;
    }
    return { metric, value, deltas };
  });

  const lcoh = row.lcoh_eur_per_mwh;
  return {
    id,
    kind: row.kind,
    costEur: row.cost_eur,
    lcohEurPerMwh: typeof lcoh === "number" ? lcoh : null,
    capacities,
    gridDeltas,
  };
}
