// Histogram with class-break markers, drawn from service-provided bins.

import type { Histogram } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const W = 320;
const H = 90;
const PAD = 6;

export function renderHistogram(hist: Histogram): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${W} ${H}`);
  svg.classList.add("histogram");

  const maxCount = Math.max(...hist.counts, 1);
  const span = hist.max - hist.min || 1;
  const xFor = (v: number) => PAD + ((v - hist.min) / span) * (W - 2 * PAD);

  hist.counts.forEach((count, i) => {
    const x0 = xFor(hist.bin_edges[i]);
    const x1 = xFor(hist.bin_edges[i + 1]);
    const h = (count / maxCount) * (H - 2 * PAD);
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("x", x0.toFixed(1));
    rect.setAttribute("y", (H - PAD - h).toFixed(1));
    rect.setAttribute("width", Math.max(x1 - x0 - 0.5, 0.5).toFixed(1));
    rect.setAttribute("height", h.toFixed(1));
    rect.setAttribute("class", "hist-bar");
    svg.appendChild(rect);
  });

  for (const brk of hist.breaks) {
    const x = xFor(brk).toFixed(1);
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", x);
    line.setAttribute("x2", x);
    line.setAttribute("y1", String(PAD));
    line.setAttribute("y2", String(H - PAD));
    line.setAttribute("class", "hist-break");
    svg.appendChild(line);
  }
  return svg;
}
