/** Mirror of the exported decision_space.json bundle, plus derived state. */

export type Op = "<=" | ">=" | "<" | ">" | "==" | "!=";

export interface Predicate {
  field: string;
  op: Op;
  value: number;
}

export interface MetricMeta {
  unit: string;
  good: "lower" | "higher";
  side: string;
}

/**
 * One flat row of the decision space. Besides the fixed fields, rows carry
 * numeric metric and `capacity_<kind>_mw` columns; grid metrics are null on
 * rows whose power flow was not assessed.
 */
export interface UiRow {
  id: string;
  kind: "spore" | "benchmark";
  cost_eur: number;
  incomplete: boolean;
  [field: string]: string | number | boolean | null;
}

export interface MetricRange {
  min: number;
  max: number;
}

export interface UiDecisionSpace {
  schemaVersion: number;
  metrics: Record<string, MetricMeta>;
  gridMetricNames: string[];
  limitPercent: number;
  window: number;
  rows: UiRow[];
  benchmarks: string[];
  presets: Record<string, Predicate[]>;
  /** min/max per numeric field, computed on load; used to clamp thresholds. */
  ranges: Record<string, MetricRange>;
  /** non-blocking data quality notices (e.g. missing benchmark rows). */
  warnings: string[];
}

export interface FilterState {
  predicates: Predicate[];
  preset: string | null;
  envelope: boolean;
  selected: string[];
}
