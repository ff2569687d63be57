/** Explorer entry point: loads the bundle, wires controls, renders the plot
 * and detail panel. All decision logic lives in the pure modules. */

import { inspectSpore } from "./detail.js";
import { lowerEnvelope } from "./envelope.js";
import { applyFilters, clampPredicate } from "./filter.js";
import { isEmpty, parseBundle, SchemaError } from "./load.js";
import { decodeState, encodeState } from "./state.js";
import type { FilterState, Predicate, UiDecisionSpace } from "./types.js";
import { axisLabel, linearScale, plotPoints } from "./viz.js";

const BUNDLE_URL = "decision_space.json";
const PLOT_W = 720;
const PLOT_H = 420;
const MARGIN = 48;

const root = document.getElementById("app")!;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderError(message: string): void {
  root.replaceChildren(el("div", "error-screen", message));
}

function renderLoading(): void {
  root.replaceChildren(el("div", "loading", "loading decision space…"));
}

class Explorer {
  private state: FilterState;
  private yField: string;

  constructor(private readonly space: UiDecisionSpace) {
    this.state = decodeState(window.location.search);
    this.yField = space.gridMetricNames[0] ?? "cost_eur";
    // drop selections that no longer exist after a reload
    this.state.selected = this.state.selected.filter((id) =>
      space.rows.some((r) => r.id === id),
    );
  }

  private activePredicates(): Predicate[] {
    const fromPreset =
      this.state.preset !== null ? this.space.presets[this.state.preset] ?? [] : [];
    const clamped = this.state.predicates.map(
      (p) => clampPredicate(this.space, p).predicate,
    );
    return [...fromPreset, ...clamped];
  }

  render(): void {
    root.replaceChildren();
    for (const w of this.space.warnings) {
      root.append(el("div", "warning-banner", w));
    }
    if (isEmpty(this.space)) {
      root.append(el("div", "empty-state", "no designs in this bundle"));
      return;
    }
    const visibleIds = new Set(
      applyFilters(this.space, this.activePredicates()).visible.map((r) => r.id),
    );
    const envelope = this.state.envelope
      ? lowerEnvelope(this.space)
      : new Set<string>();

    root.append(this.controls());
    root.append(this.plot(visibleIds, envelope));
    const selected = this.state.selected[0];
    if (selected !== undefined) {
      root.append(this.detail(selected, visibleIds));
    }
    const url = encodeState(this.state);
    history.replaceState(null, "", url ? `?${url}` : window.location.pathname);
  }

  private controls(): HTMLElement {
    const bar = el("div", "controls");

    const presetSel = el("select");
    presetSel.append(new Option("— no preset —", ""));
    for (const name of Object.keys(this.space.presets).sort()) {
      presetSel.append(new Option(name, name, false, name === this.state.preset));
    }
    presetSel.onchange = () => {
      this.state.preset = presetSel.value === "" ? null : presetSel.value;
      this.render();
    };
    bar.append(el("label", undefined, "preset "), presetSel);

    const metricSel = el("select");
    for (const name of this.space.gridMetricNames) {
      metricSel.append(new Option(name, name, false, name === this.yField));
    }
    metricSel.onchange = () => {
      this.yField = metricSel.value;
      this.render();
    };
    bar.append(el("label", undefined, " grid metric "), metricSel);

    const envToggle = el("input") as HTMLInputElement;
    envToggle.type = "checkbox";
    envToggle.checked = this.state.envelope;
    envToggle.onchange = () => {
      this.state.envelope = envToggle.checked;
      this.render();
    };
    const envLabel = el("label", undefined, " lower grid-loading envelope ");
    envLabel.prepend(envToggle);
    bar.append(envLabel);
    return bar;
  }

  private plot(visible: Set<string>, envelope: Set<string>): SVGSVGElement {
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", `0 0 ${PLOT_W} ${PLOT_H}`);
    svg.classList.add("scatter");

    const xField = "cost_eur";
    const points = plotPoints(this.space, xField, this.yField);
    const xr = this.space.ranges[xField] ?? { min: 0, max: 1 };
    const yr = this.space.ranges[this.yField] ?? { min: 0, max: 1 };
    const xs = linearScale(xr.min, xr.max, MARGIN, PLOT_W - MARGIN);
    const ys = linearScale(yr.min, yr.max, PLOT_H - MARGIN, MARGIN);

    for (const [field, scale, x, y] of [
      [xField, xs, PLOT_W / 2, PLOT_H - 8],
      [this.yField, ys, 14, PLOT_H / 2],
    ] as const) {
      void scale;
      const label = document.createElementNS("http://www.w3.org/2000/svg", "text");
      label.setAttribute("x", String(x));
      label.setAttribute("y", String(y));
      label.classList.add("axis-label");
      if (field === this.yField) {
        label.setAttribute("transform", `rotate(-90 14 ${PLOT_H / 2})`);
      }
      label.textContent = axisLabel(this.space, field);
      svg.append(label);
    }

    for (const p of points) {
      if (p.x === null || p.y === null) continue;
      const node = document.createElementNS(
        "http://www.w3.org/2000/svg",
        p.kind === "benchmark" ? "rect" : "circle",
      );
      const cx = xs.toScreen(p.x);
      const cy = ys.toScreen(p.y);
      if (p.kind === "benchmark") {
        node.setAttribute("x", String(cx - 5));
        node.setAttribute("y", String(cy - 5));
        node.setAttribute("width", "10");
        node.setAttribute("height", "10");
        node.setAttribute("transform", `rotate(45 ${cx} ${cy})`);
      } else {
        node.setAttribute("cx", String(cx));
        node.setAttribute("cy", String(cy));
        node.setAttribute("r", "5");
      }
      node.classList.add("point", p.kind);
      if (!visible.has(p.id)) node.classList.add("filtered-out");
      if (envelope.has(p.id)) node.classList.add("envelope");
      if (this.state.selected.includes(p.id)) node.classList.add("selected");
      node.addEventListener("click", () => {
        this.state.selected = [p.id];
        this.render();
      });
      const title = document.createElementNS("http://www.w3.org/2000/svg", "title");
      title.textContent = p.id;
      node.append(title);
      svg.append(node);
    }
    return svg;
  }

  private detail(id: string, visible: Set<string>): HTMLElement {
    const panel = el("div", "detail");
    const d = inspectSpore(this.space, id);
    const head = el("h2", undefined, d.id);
    if (!visible.has(id)) {
      head.append(el("span", "badge", "filtered out"));
    }
    panel.append(head);
    panel.append(
      el("p", undefined, `annual cost: ${Math.round(d.costEur).toLocaleString()} EUR/a`),
    );
    if (d.lcohEurPerMwh !== null) {
      panel.append(el("p", undefined, `LCOH: ${d.lcohEurPerMwh.toFixed(1)} EUR/MWh`));
    }

    const mix = el("div", "capacity-mix");
    const maxMw = Math.max(...d.capacities.map((c) => c.mw), 1);
    for (const c of d.capacities) {
      const rowEl = el("div", "mix-row");
      rowEl.append(el("span", "mix-kind", c.kind));
      const bar = el("div", "mix-bar");
      bar.style.width = `${(100 * c.mw) / maxMw}%`;
      rowEl.append(bar, el("span", "mix-mw", `${c.mw.toFixed(1)} MW`));
      mix.append(rowEl);
    }
    panel.append(el("h3", undefined, "capacity mix"), mix);

    const table = el("table", "deltas");
    const header = el("tr");
    header.append(el("th", undefined, "grid metric"), el("th", undefined, "value"));
    for (const b of this.space.benchmarks) {
      header.append(el("th", undefined, `Δ vs ${b}`));
    }
    table.append(header);
    for (const gd of d.gridDeltas) {
      const tr = el("tr");
      tr.append(el("td", undefined, gd.metric));
      tr.append(el("td", undefined, gd.value === null ? "—" : gd.value.toFixed(2)));
      for (const b of this.space.benchmarks) {
        const delta = gd.deltas[b];
        const td = el("td", undefined, delta == null ? "—" : delta.toFixed(2));
        if (delta != null && delta < 0) td.classList.add("improvement");
        tr.append(td);
      }
      table.append(tr);
    }
    panel.append(el("h3", undefined, "grid impact vs benchmarks"), table);
    return panel;
  }
}

async function boot(): Promise<void> {
  renderLoading();
  let doc: unknown;
  try {
    const resp = await fetch(BUNDLE_URL);
    if (!resp.ok) throw new Error(`fetching ${BUNDLE_URL}: HTTP ${resp.status}`);
    doc = await resp.json();
  } catch (e) {
    renderError(`could not load ${BUNDLE_URL}: ${String(e)}`);
    return;
  }
  try {
    const space = parseBundle(doc);
    new Explorer(space).render();
  } catch (e) {
    if (e instanceof SchemaError) {
      renderError(
        `schema mismatch: bundle is version ${String(e.found)}, ` +
          `supported version is ${e.supported}`,
      );
    } else {
      renderError(String(e));
    }
  }
}

void boot();
