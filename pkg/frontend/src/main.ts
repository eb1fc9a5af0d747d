// Entry point for the served page: a small input form feeding the App.

import { ApiClient } from "./api.js";
import { App } from "./app.js";

function textareaField(label: string, placeholder: string, rows = 6): [HTMLElement, HTMLTextAreaElement] {
  const wrap = document.createElement("label");
  wrap.className = "input-field";
  const caption = document.createElement("span");
  caption.textContent = label;
  const area = document.createElement("textarea");
  area.rows = rows;
  area.placeholder = placeholder;
  wrap.append(caption, area);
  return [wrap, area];
}

function boot(): void {
  const rootEl = document.getElementById("app");
  if (!rootEl) return;

  const form = document.createElement("div");
  form.className = "input-form";
  const heading = document.createElement("h1");
  heading.textContent = "geolint";
  const intro = document.createElement("p");
  intro.textContent =
    "Paste a map spec, its GeoJSON boundaries, and (optionally) a CSV attribute table.";
  const [specWrap, specArea] = textareaField("Spec (JSON)", '{"mark": "geoshape", ...}', 10);
  const [geoWrap, geoArea] = textareaField("Boundaries (GeoJSON)", '{"type": "FeatureCollection", ...}');
  const [csvWrap, csvArea] = textareaField("Attribute table (CSV)", "id,value\\n...", 4);
  const analyze = document.createElement("button");
  analyze.textContent = "Analyze";
  analyze.className = "analyze";

  const stage = document.createElement("div");
  stage.id = "stage";

  analyze.addEventListener("click", () => {
    const spec = specArea.value.trim();
    if (!spec) return;
    void App.boot(
      stage,
      {
        spec,
        geojson: geoArea.value.trim() || undefined,
        data: csvArea.value.trim() || undefined,
      },
      new ApiClient(""),
    );
  });

  form.append(heading, intro, specWrap, geoWrap, csvWrap, analyze);
  rootEl.append(form, stage);
}

boot();
