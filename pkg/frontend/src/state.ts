/** URL-encodable filter state for shareable views. */

import type { FilterState, Op, Predicate } from "./types.js";

const OPS: Op[] = ["<=", ">=", "<", ">", "==", "!="];

export function emptyState(): FilterState {
  return { predicates: [], preset: null, envelope: false, selected: [] };
}

/** p=<field><op><value>, repeated; preset=<id>; env=1; sel=a,b,c */
export function encodeState(state: FilterState): string {
  const params = new URLSearchParams();
  for (const p of state.predicates) {
    params.append("p", `${p.field}${p.op}${p.value}`);
  }
  if (state.preset !== null) params.set("preset", state.preset);
  if (state.envelope) params.set("env", "1");
  if (state.selected.length > 0) params.set("sel", state.selected.join(","));
  return params.toString();
}

function parsePredicate(text: string): Predicate | null {
  // two-character operators first so "<=" is not read as "<"
  for (const op of OPS) {
    const i = text.indexOf(op);
    if (i <= 0) continue;
    const field = text.slice(0, i);
    const value = Number(text.slice(i + op.length));
    if (!Number.isFinite(value)) return null;
    return { field, op, value };
  }
  return null;
}

export function decodeState(query: string): FilterState {
  const params = new URLSearchParams(query);
  const predicates = params
    .getAll("p")
    .map(parsePredicate)
    .filter((p): p is Predicate => p !== null);
  const sel = params.get("sel");
  return {
    predicates,
    preset: params.get("preset"),
    envelope: params.get("env") === "1",
    selected: sel === null || sel === "" ? [] : sel.split(","),
  };
}
