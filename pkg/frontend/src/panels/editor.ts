// Spec editor with change tracking against the pinned original. Collapsible,
// since most sessions drive the map from the other panels.

import type { App } from "../app.js";
import { changedOnly, lineDiff } from "../diff.js";

export function renderEditor(container: HTMLElement, app: App): void {
  container.replaceChildren();
  const details = document.createElement("details");
  details.className = "editor-panel";
  details.open = app.editorOpen;
  details.addEventListener("toggle", () => {
    app.editorOpen = details.open;
  });
  const summary = document.createElement("summary");
  summary.textContent = "Spec editor & diff";
  details.appendChild(summary);

  const textarea = document.createElement("textarea");
  textarea.className = "spec-editor";
  textarea.rows = 18;
  textarea.value = app.state.workingSpecText;
  details.appendChild(textarea);

  if (app.state.syntaxError) {
    const err = app.state.syntaxError;
    const marker = document.createElement("p");
    marker.className = "syntax-error";
    marker.textContent = `Syntax error at line ${err.line}, column ${err.col}: ${err.detail}`;
    details.appendChild(marker);
  }

  const apply = document.createElement("button");
  apply.className = "apply-edits";
  apply.textContent = "Apply edits";
  apply.addEventListener("click", () => {
    void app.setWorkingSpec(textarea.value);
  });
  details.appendChild(apply);

  const diffBox = document.createElement("div");
  diffBox.className = "diff-view";
  const lines = changedOnly(lineDiff(app.state.originalSpecText, app.state.workingSpecText));
  if (!lines.length) {
    const none = document.createElement("p");
    none.className = "note empty";
    none.textContent = "No changes against the original yet.";
    diffBox.appendChild(none);
  }
  for (const line of lines) {
    const row = document.createElement("div");
    row.className = `diff-line diff-${line.kind}`;
    const prefix = line.kind === "added" ? "+" : line.kind === "removed" ? "-" : " ";
    row.textContent = `${prefix} ${line.text}`;
    diffBox.appendChild(row);
  }
  details.appendChild(diffBox);

  if (app.patchLog.length) {
    const logHead = document.createElement("h3");
    logHead.textContent = "Applied patches";
    details.appendChild(logHead);
    const list = document.createElement("ul");
    list.className = "patch-log";
    for (const entry of app.patchLog) {
      const item = document.createElement("li");
      item.textContent = `[${entry.code}] ${entry.label} — ${entry.patches
        .map((p) => `${p.op} ${p.path}`)
        .join(", ")}`;
      list.appendChild(item);
    }
    details.appendChild(list);
  }
  container.appendChild(details);
}
