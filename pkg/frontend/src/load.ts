/** Bundle parsing and validation; rejects unknown schema versions. */

import type { MetricRange, Predicate, UiDecisionSpace, UiRow } from "./types.js";

export const SUPPORTED_SCHEMA_VERSION = 1;

export class SchemaError extends Error {
  readonly found: unknown;
  readonly supported: number;

  constructor(found: unknown) {
    super(
      `unsupported bundle schema version ${String(found)}; ` +
        `this explorer understands version ${SUPPORTED_SCHEMA_VERSION}`,
    );
    this.name = "SchemaError";
    this.found = found;
    this.supported = SUPPORTED_SCHEMA_VERSION;
  }
}

function isRecord(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function asRows(raw: unknown): UiRow[] {
  if (!Array.isArray(raw)) throw new Error("bundle field 'rows' must be an array");
  return raw.map((r, i) => {
    if (!isRecord(r)) throw new Error(`row ${i} is not an object`);
    if (typeof r.id !== "string") throw new Error(`row ${i} has no string id`);
    if (r.kind !== "spore" && r.kind !== "benchmark") {
      throw new Error(`row ${r.id}: unknown kind ${String(r.kind)}`);
    }
    if (typeof r.cost_eur !== "number") {
      throw new Error(`row ${r.id}: cost_eur must be a number`);
    }
    return r as unknown as UiRow;
  });
}

function computeRanges(rows: UiRow[]): Record<string, MetricRange> {
  const ranges: Record<string, MetricRange> = {};
  for (const row of rows) {
    for (const [field, value] of Object.entries(row)) {
      if (typeof value !== "number" || !Number.isFinite(value)) continue;
      const r = ranges[field];
      if (r === undefined) {
        ranges[field] = { min: value, max: value };
      } else {
        r.min = Math.min(r.min, value);
        r.max = Math.max(r.max, value);
      }
    }
  }
  return ranges;
}

/**
 * Parse and validate a decision_space.json document.
 *
 * Throws SchemaError on a version mismatch (blocking), Error on structural
 * problems. Soft data issues (missing benchmark rows) land in `warnings`.
 */
export function parseBundle(doc: unknown): UiDecisionSpace {
  if (!isRecord(doc)) throw new Error("bundle is not a JSON object");
  if (doc.schema_version !== SUPPORTED_SCHEMA_VERSION) {
    throw new SchemaError(doc.schema_version);
  }
  const rows = asRows(doc.rows);
  const benchmarks = Array.isArray(doc.benchmarks)
    ? doc.benchmarks.filter((b): b is string => typeof b === "string")
    : [];
  const warnings: string[] = [];
  const present = new Set(rows.map((r) => r.id));
  for (const b of benchmarks) {
    if (!present.has(b)) warnings.push(`benchmark row '${b}' is missing from rows`);
  }
  if (benchmarks.length === 0) {
    warnings.push("bundle declares no benchmark rows; deltas and the envelope are unavailable");
  }
  const metrics = isRecord(doc.metrics)
    ? (doc.metrics as UiDecisionSpace["metrics"])
    : {};
  const gridMetricNames = Array.isArray(doc.grid_metric_names)
    ? doc.grid_metric_names.filter((n): n is string => typeof n === "string")
    : [];
  const presets = isRecord(doc.presets)
    ? (doc.presets as Record<string, Predicate[]>)
    : {};
  return {
    schemaVersion: SUPPORTED_SCHEMA_VERSION,
    metrics,
    gridMetricNames,
    limitPercent: typeof doc.limit_percent === "number" ? doc.limit_percent : 110,
    window: typeof doc.window === "number" ? doc.window : 7,
    rows,
    benchmarks,
    presets,
    ranges: computeRanges(rows),
    warnings,
  };
}

export function isEmpty(space: UiDecisionSpace): boolean {
  return space.rows.length === 0;
}
