// Detected-violations panel: one card per diagnostic with explanation and
// fix buttons. Rules that have been fixed stay visible with their options
// retained instead of vanishing.

import type { App } from "../app.js";
import type { Diagnostic } from "../types.js";

export function renderViolations(container: HTMLElement, app: App): void {
  container.replaceChildren();
  const report = app.state.lastReport;
  const heading = document.createElement("h2");
  heading.textContent = "Detected violations";
  container.appendChild(heading);

  if (!report) {
    container.appendChild(note("Run the linter to see violations."));
    return;
  }

  if (report.diagnostics.length === 0) {
    container.appendChild(note("No rule violations — the map follows the guidelines."));
  }

  for (const diag of report.diagnostics) {
    container.appendChild(card(diag, app));
  }

  if (app.state.fixedRules.length) {
    const fixedHeading = document.createElement("h3");
    fixedHeading.textContent = "Fixed (settings retained)";
    container.appendChild(fixedHeading);
    for (const fixed of app.state.fixedRules) {
      if (report.diagnostics.some((d) => d.code === fixed.code)) continue;
      const box = document.createElement("div");
      box.className = "card fixed-card";
      box.dataset.code = fixed.code;
      const head = document.createElement("div");
      head.className = "card-head";
      head.textContent = `${fixed.code} — fixed: ${fixed.label}`;
      box.appendChild(head);
      const options = document.createElement("div");
      options.className = "retained-options";
      fixed.options.forEach((label, idx) => {
        const button = document.createElement("button");
        button.textContent = label;
        button.addEventListener("click", () => void app.applyFix(fixed.code, idx));
        options.appendChild(button);
      });
      box.appendChild(options);
      container.appendChild(box);
    }
  }

  for (const skip of report.skipped) {
    container.appendChild(note(`${skip.code} skipped: ${skip.reason}`, "skip"));
  }
}

function card(diag: Diagnostic, app: App): HTMLElement {
  const box = document.createElement("div");
  box.className = `card violation-card severity-${diag.severity}`;
  box.dataset.code = diag.code;

  const head = document.createElement("div");
  head.className = "card-head";
  const badge = diag.advisory ? "advisory" : diag.severity;
  head.textContent = `${diag.code} (${badge}) at ${diag.location}`;
  box.appendChild(head);

  const message = document.createElement("p");
  message.className = "message";
  message.textContent = diag.message;
  box.appendChild(message);

  const why = document.createElement("p");
  why.className = "explanation";
  why.textContent = diag.explanation;
  box.appendChild(why);

  if (diag.fixes.length === 0) {
    box.appendChild(note("No automatic fix — this needs author input.", "no-fix"));
    return box;
  }
  const fixes = document.createElement("div");
  fixes.className = "fix-options";
  diag.fixes.forEach((fix, idx) => {
    const button = document.createElement("button");
    button.className = idx === 0 ? "fix-button quick-fix" : "fix-button";
    button.textContent = idx === 0 ? `Fix: ${fix.label}` : fix.label;
    button.addEventListener("click", () => void app.applyFix(diag.code, idx));
    fixes.appendChild(button);
  });
  box.appendChild(fixes);
  return box;
}

function note(text: string, cls = "empty"): HTMLElement {
  const p = document.createElement("p");
  p.className = `note ${cls}`;
  p.textContent = text;
  return p;
}
