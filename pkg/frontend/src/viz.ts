/** Pure plotting-data derivation: one point per row, screen-space layout. */

import type { UiDecisionSpace, UiRow } from "./types.js";

export interface PlotPoint {
  id: string;
  kind: "spore" | "benchmark";
  x: number | null; // null when the metric is unassessed for this row
  y: number | null;
  row: UiRow;
}

/** One point per row of the space, regardless of filtering (cardinality holds). */
export function plotPoints(
  space: UiDecisionSpace,
  xField: string,
  yField: string,
): PlotPoint[] {
  return space.rows.map((row) => {
    const xv = row[xField];
    const yv = row[yField];
    return {
      id: row.id,
      kind: row.kind,
      x: typeof xv === "number" ? xv : null,
      y: typeof yv === "number" ? yv : null,
      row,
    };
  });
}

export interface Scale {
  min: number;
  max: number;
  toScreen(value: number): number;
}

export function linearScale(
  min: number,
  max: number,
  screenMin: number,
  screenMax: number,
): Scale {
  const span = max - min || 1;
  return {
    min,
    max,
    toScreen: (value: number) =>
      screenMin + ((value - min) / span) * (screenMax - screenMin),
  };
}

/** Axis label carrying the direction-of-good from the metric metadata. */
export function axisLabel(space: UiDecisionSpace, field: string): string {
  const meta = space.metrics[field];
  if (meta === undefined) return field;
  const arrow = meta.good === "lower" ? "↓ better" : "↑ better";
  return `${field} [${meta.unit}] (${arrow})`;
}
