// Map panels: the original choropleth (pinned at load), the working map
// after fixes (or the hovered candidate classification), the histogram with
// break markers, and the score-delta table.

import type { App } from "../app.js";
import { renderHistogram } from "../render/histogram.js";
import { renderLegend, renderMap } from "../render/svgmap.js";

export function renderMaps(container: HTMLElement, app: App): void {
  container.replaceChildren();

  const original = document.createElement("section");
  original.className = "map-panel original-map";
  const originalHead = document.createElement("h2");
  originalHead.textContent = "Original map";
  original.appendChild(originalHead);
  if (app.state.previewOriginal) {
    if (app.state.previewOriginal.title) {
      original.appendChild(mapTitle(app.state.previewOriginal.title));
    }
    original.appendChild(renderMap(app.state.previewOriginal));
    original.appendChild(renderLegend(app.state.previewOriginal));
  }
  container.appendChild(original);

  const working = document.createElement("section");
  working.className = "map-panel working-map";
  const workingHead = document.createElement("h2");
  workingHead.textContent = app.hoveredPreview ? "Preview (hovered method)" : "After fixes";
  working.appendChild(workingHead);
  const preview = app.hoveredPreview ?? app.state.previewWorking;
  if (preview) {
    if (preview.title) working.appendChild(mapTitle(preview.title));
    working.appendChild(renderMap(preview));
    working.appendChild(renderLegend(preview));
    if (preview.histogram) {
      working.appendChild(renderHistogram(preview.histogram));
    }
    if (preview.projection_substituted) {
      const warn = document.createElement("p");
      warn.className = "note warn";
      warn.textContent = `Spec projection not drawable; showing ${preview.projection}.`;
      working.appendChild(warn);
    }
  }
  working.appendChild(deltaTable(app));
  container.appendChild(working);
}

function mapTitle(text: string): HTMLElement {
  const el = document.createElement("div");
  el.className = "map-title";
  el.textContent = text;
  return el;
}

function deltaTable(app: App): HTMLElement {
  const table = document.createElement("table");
  table.className = "delta-table";
  const before = app.state.originalScores;
  const after = app.state.lastReport?.scores ?? null;
  const delta = app.state.scoreDelta();
  table.innerHTML = "<thead><tr><th></th><th>original</th><th>current</th><th>Δ</th></tr></thead>";
  const tbody = document.createElement("tbody");
  tbody.appendChild(deltaRow("GVF", before?.gvf ?? null, after?.gvf ?? null, delta.gvf));
  tbody.appendChild(
    deltaRow("Moran's I", before?.morans_i ?? null, after?.morans_i ?? null, delta.morans_i),
  );
  table.appendChild(tbody);
  return table;
}

function deltaRow(
  label: string,
  before: number | null,
  after: number | null,
  delta: number | null,
): HTMLElement {
  const tr = document.createElement("tr");
  tr.dataset.metric = label;
  const fmt = (v: number | null) => (v == null ? "—" : v.toFixed(4));
  const sign = delta != null && delta > 0 ? "+" : "";
  tr.innerHTML =
    `<td>${label}</td><td>${fmt(before)}</td><td>${fmt(after)}</td>` +
    `<td class="delta">${delta == null ? "—" : sign + delta.toFixed(4)}</td>`;
  return tr;
}
