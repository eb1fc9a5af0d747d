// Status & global options: projection, title, stroke, background. These are
// plain document edits (no cartographic math); the service re-judges them.

import type { App } from "../app.js";

const PROJECTIONS = [
  "equalEarth",
  "albersUsa",
  "albers",
  "azimuthalEqualArea",
  "tcea",
  "naturalEarth1",
  "mercator",
];

export function renderOptions(container: HTMLElement, app: App): void {
  container.replaceChildren();
  const heading = document.createElement("h2");
  heading.textContent = "Status & global options";
  container.appendChild(heading);

  const status = document.createElement("p");
  status.className = "status-line";
  const report = app.state.lastReport;
  if (report) {
    status.textContent = report.clean
      ? "Status: clean"
      : `Status: ${report.diagnostics.length} violation(s) — ` +
        report.diagnostics.map((d) => d.code).join(", ");
  } else {
    status.textContent = "Status: not linted yet";
  }
  container.appendChild(status);

  let parsed: Record<string, unknown> | null = null;
  try {
    parsed = JSON.parse(app.state.workingSpecText) as Record<string, unknown>;
  } catch {
    parsed = null;
  }
  if (!parsed) {
    const warn = document.createElement("p");
    warn.className = "note warn";
    warn.textContent = "Options disabled while the spec has syntax errors.";
    container.appendChild(warn);
    return;
  }

  const form = document.createElement("div");
  form.className = "options-form";

  const projection = select(
    "projection",
    PROJECTIONS,
    ((parsed.projection as Record<string, unknown>)?.type as string) ?? "equalEarth",
  );
  form.appendChild(labeled("Projection", projection));

  const title = input("text", (parsed.title as string) ?? "");
  form.appendChild(labeled("Title", title));

  const mark = parsed.mark;
  const strokeValue =
    typeof mark === "object" && mark !== null
      ? ((mark as Record<string, unknown>).stroke as string) ?? ""
      : "";
  const stroke = input("text", strokeValue);
  stroke.placeholder = "#000000 (empty = no stroke)";
  form.appendChild(labeled("Stroke color", stroke));

  const widthValue =
    typeof mark === "object" && mark !== null
      ? String((mark as Record<string, unknown>).strokeWidth ?? "1")
      : "1";
  const strokeWidth = input("number", widthValue);
  strokeWidth.step = "0.25";
  strokeWidth.min = "0";
  form.appendChild(labeled("Stroke width", strokeWidth));

  const background = input("text", (parsed.background as string) ?? "#ffffff");
  form.appendChild(labeled("Background", background));

  const apply = document.createElement("button");
  apply.className = "apply-options";
  apply.textContent = "Apply options";
  apply.addEventListener("click", () => {
    const next = JSON.parse(app.state.workingSpecText) as Record<string, unknown>;
    next.projection = { type: projection.value };
    if (title.value.trim()) {
      next.title = title.value;
    } else {
      delete next.title;
    }
    const markValue = next.mark;
    const markObj: Record<string, unknown> =
      typeof markValue === "object" && markValue !== null
        ? (markValue as Record<string, unknown>)
        : { type: typeof markValue === "string" ? markValue : "geoshape" };
    if (stroke.value.trim()) {
      markObj.stroke = stroke.value.trim();
      markObj.strokeWidth = Number(strokeWidth.value) || 1;
    } else {
      delete markObj.stroke;
      delete markObj.strokeWidth;
    }
    next.mark = markObj;
    if (background.value.trim()) {
      next.background = background.value.trim();
    } else {
      delete next.background;
    }
    void app.setWorkingSpec(JSON.stringify(next, null, 2) + "\n");
  });
  form.appendChild(apply);
  container.appendChild(form);
}

function labeled(text: string, control: HTMLElement): HTMLElement {
  const label = document.createElement("label");
  label.className = "option";
  const caption = document.createElement("span");
  caption.textContent = text;
  label.append(caption, control);
  return label;
}

function select(name: string, options: string[], value: string): HTMLSelectElement {
  const el = document.createElement("select");
  el.name = name;
  for (const option of options) {
    const o = document.createElement("option");
    o.value = option;
    o.textContent = option;
    if (option === value) o.selected = true;
    el.appendChild(o);
  }
  return el;
}

function input(type: string, value: string): HTMLInputElement {
  const el = document.createElement("input");
  el.type = type;
  el.value = value;
  return el;
}
