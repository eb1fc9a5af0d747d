// Classification-recommendation panel: the full (method, k) score table,
// band marking the advisable 3..7 class range, a GVF-vs-k chart, the current
// method highlighted, preview on hover and quick-fix on click.

import type { App } from "../app.js";
import type { ScoreRow } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderRecommendation(container: HTMLElement, app: App): void {
  container.replaceChildren();
  const heading = document.createElement("h2");
  heading.textContent = "Classification recommendations";
  container.appendChild(heading);

  const rows = app.state.scoreTable;
  if (!rows.length) {
    const p = document.createElement("p");
    p.className = "note empty";
    p.textContent = "No score table (needs data values).";
    container.appendChild(p);
    return;
  }

  container.appendChild(chart(rows, app));

  const table = document.createElement("table");
  table.className = "score-table";
  const thead = document.createElement("thead");
  thead.innerHTML =
    "<tr><th></th><th>method</th><th>k</th><th>GVF</th><th>Moran's I</th><th></th></tr>";
  table.appendChild(thead);
  const tbody = document.createElement("tbody");

  const current = app.state.lastReport?.scores ?? null;
  const [bandLo, bandHi] = app.state.recommendedK;

  for (const row of rows) {
    const tr = document.createElement("tr");
    tr.className = "score-row";
    tr.dataset.method = row.method;
    tr.dataset.k = String(row.k);
    if (row.k >= bandLo && row.k <= bandHi) tr.classList.add("band");
    const isCurrent = current != null && current.k === row.k && current.method === row.method;

    const dot = document.createElement("td");
    dot.className = "current-dot";
    dot.textContent = isCurrent ? "●" : "";
    if (isCurrent) dot.classList.add("current");
    const method = document.createElement("td");
    method.textContent = row.method;
    const k = document.createElement("td");
    k.textContent = String(row.k);
    const gvf = document.createElement("td");
    gvf.textContent = row.gvf.toFixed(4);
    const morans = document.createElement("td");
    morans.textContent = row.morans_i == null ? "—" : row.morans_i.toFixed(4);
    if (row.morans_i == null) morans.classList.add("blank");

    const action = document.createElement("td");
    const optionIndex = quickFixOption(row, app);
    if (optionIndex !== null) {
      const button = document.createElement("button");
      button.className = "apply-row";
      button.textContent = "apply";
      button.addEventListener("click", () => void app.applyFix(optionIndex.code, optionIndex.index));
      action.appendChild(button);
    }
    tr.append(dot, method, k, gvf, morans, action);
    tr.addEventListener("mouseenter", () => {
      void app.hoverPreview({ method: row.method, k: row.k });
    });
    tr.addEventListener("mouseleave", () => {
      app.clearHoverPreview();
    });
    tbody.appendChild(tr);
  }
  table.appendChild(tbody);
  container.appendChild(table);
}

/** Find the fix option matching this row among the classification rules. */
function quickFixOption(
  row: ScoreRow,
  app: App,
): { code: string; index: number } | null {
  const report = app.state.lastReport;
  if (!report) return null;
  const needle = `${row.method}, ${row.k} classes`;
  for (const code of ["LOW_GVF", "NUM_CLASSES"]) {
    const diag = report.diagnostics.find((d) => d.code === code);
    if (!diag) continue;
    const index = diag.fixes.findIndex((f) => f.label.includes(needle));
    if (index >= 0) return { code, index };
  }
  return null;
}

function chart(rows: ScoreRow[], app: App): SVGSVGElement {
  const W = 340;
  const H = 150;
  const PAD = 24;
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${W} ${H}`);
  svg.classList.add("score-chart");

  const ks = rows.map((r) => r.k);
  const kMin = Math.min(...ks);
  const kMax = Math.max(...ks);
  const xFor = (k: number) =>
    PAD + ((k - kMin) / Math.max(kMax - kMin, 1)) * (W - 2 * PAD);
  const yFor = (g: number) => H - PAD - g * (H - 2 * PAD);

  // green band over the advisable class counts
  const [bandLo, bandHi] = app.state.recommendedK;
  const band = document.createElementNS(SVG_NS, "rect");
  band.setAttribute("x", String(xFor(Math.max(bandLo, kMin))));
  band.setAttribute(
    "width",
    String(Math.max(xFor(Math.min(bandHi, kMax)) - xFor(Math.max(bandLo, kMin)), 0)),
  );
  band.setAttribute("y", String(PAD));
  band.setAttribute("height", String(H - 2 * PAD));
  band.setAttribute("class", "recommended-band");
  svg.appendChild(band);

  const byMethod = new Map<string, ScoreRow[]>();
  for (const row of rows) {
    const list = byMethod.get(row.method) ?? [];
    list.push(row);
    byMethod.set(row.method, list);
  }
  const current = app.state.lastReport?.scores ?? null;
  for (const [method, list] of byMethod) {
    list.sort((a, b) => a.k - b.k);
    const line = document.createElementNS(SVG_NS, "polyline");
    line.setAttribute(
      "points",
      list.map((r) => `${xFor(r.k).toFixed(1)},${yFor(r.gvf).toFixed(1)}`).join(" "),
    );
    line.setAttribute("class", "method-line");
    line.dataset.method = method;
    svg.appendChild(line);
  }
  if (current?.k != null && current.gvf != null) {
    const dot = document.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", String(xFor(current.k)));
    dot.setAttribute("cy", String(yFor(current.gvf)));
    dot.setAttribute("r", "4");
    dot.setAttribute("class", "current-method-dot");
    svg.appendChild(dot);
  }
  return svg;
}
