/** Constraint filtering with semantics identical to the pipeline CLI. */

import type { Op, Predicate, UiDecisionSpace, UiRow } from "./types.js";

export const OPS: Record<Op, (a: number, b: number) => boolean> = {
  "<=": (a, b) => a <= b,
  ">=": (a, b) => a >= b,
  "<": (a, b) => a < b,
  ">": (a, b) => a > b,
  "==": (a, b) => a === b,
  "!=": (a, b) => a !== b,
};

/** A null metric (unassessed grid impact) never satisfies a predicate. */
export function matches(row: UiRow, pred: Predicate): boolean {
  if (!(pred.field in row)) {
    throw new Error(`predicate references unknown field '${pred.field}'`);
  }
  const v = row[pred.field];
  if (typeof v !== "number") return false;
  return OPS[pred.op](v, pred.value);
}

export interface FilterResult {
  /** benchmark rows plus the spore rows satisfying every predicate. */
  visible: UiRow[];
  /** ids of surviving spore rows, sorted — the CLI `plan filter` contract. */
  sporeIds: string[];
}

export function applyFilters(
  space: UiDecisionSpace,
  predicates: Predicate[],
): FilterResult {
  const visible = space.rows.filter(
    (r) => r.kind === "benchmark" || predicates.every((p) => matches(r, p)),
  );
  const sporeIds = visible
    .filter((r) => r.kind === "spore")
    .map((r) => r.id)
    .sort();
  return { visible, sporeIds };
}

export function applyPreset(space: UiDecisionSpace, name: string): FilterResult {
  const predicates = space.presets[name];
  if (predicates === undefined) {
    throw new Error(
      `unknown preset '${name}' (available: ${Object.keys(space.presets).sort().join(", ")})`,
    );
  }
  return applyFilters(space, predicates);
}

export interface ClampResult {
  predicate: Predicate;
  clamped: boolean;
}

/** Pull a threshold inside the loaded metric range; flags the adjustment. */
export function clampPredicate(
  space: UiDecisionSpace,
  pred: Predicate,
): ClampResult {
  const range = space.ranges[pred.field];
  if (range === undefined) return { predicate: pred, clamped: false };
  const value = Math.min(Math.max(pred.value, range.min), range.max);
  return value === pred.value
    ? { predicate: pred, clamped: false }
    : { predicate: { ...pred, value }, clamped: true };
}
