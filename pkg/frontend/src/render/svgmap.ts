// SVG map rendering from pre-projected rings. No cartographic math here:
// coordinates arrive in viewport space from the service.

import type { Preview } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderMap(preview: Preview): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${preview.width} ${preview.height}`);
  svg.setAttribute("preserveAspectRatio", "xMidYMid meet");
  svg.classList.add("choropleth");
  svg.style.background = preview.background;

  for (const region of preview.regions) {
    if (!region.rings.length) continue;
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", ringsToPath(region.rings));
    path.setAttribute("fill", region.fill);
    path.setAttribute("fill-rule", "evenodd");
    if (preview.stroke) {
      path.setAttribute("stroke", preview.stroke);
      path.setAttribute("stroke-width", String(preview.stroke_width));
    }
    path.dataset.regionId = region.id;
    const tooltip = document.createElementNS(SVG_NS, "title");
    tooltip.textContent = region.id;
    path.appendChild(tooltip);
    svg.appendChild(path);
  }
  return svg;
}

function ringsToPath(rings: [number, number][][]): string {
  const parts: string[] = [];
  for (const ring of rings) {
    ring.forEach(([x, y], i) => {
      parts.push(`${i === 0 ? "M" : "L"}${x},${y}`);
    });
    parts.push("Z");
  }
  return parts.join(" ");
}

export function renderLegend(preview: Preview): HTMLElement {
  const box = document.createElement("div");
  box.className = "legend";
  if (preview.legend_title) {
    const title = document.createElement("div");
    title.className = "legend-title";
    title.textContent = preview.legend_title;
    box.appendChild(title);
  }
  for (const entry of preview.legend) {
    const row = document.createElement("div");
    row.className = "legend-entry";
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = entry.color;
    const label = document.createElement("span");
    label.textContent = entry.count == null ? entry.label : `${entry.label}  (${entry.count})`;
    row.append(swatch, label);
    box.appendChild(row);
  }
  return box;
}
