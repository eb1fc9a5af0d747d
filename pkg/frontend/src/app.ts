// Application shell: owns the session state, talks to the service, and
// re-renders the six panels after every state change. The UI computes no
// cartographic values; everything judged or derived arrives from the service.

import { ApiClient, STALE, ServiceError } from "./api.js";
import { SessionState } from "./state.js";
import { renderEditor } from "./panels/editor.js";
import { renderMaps } from "./panels/maps.js";
import { renderOptions } from "./panels/options.js";
import { renderRecommendation } from "./panels/recommendation.js";
import { renderViolations } from "./panels/violations.js";
import type {
  ClassificationOverride,
  FixResponse,
  Preview,
  SessionInputs,
} from "./types.js";

export interface PatchLogEntry {
  code: string;
  label: string;
  patches: { op: string; path: string }[];
}

export class App {
  state: SessionState;
  client: ApiClient;
  root: HTMLElement;
  hoveredPreview: Preview | null = null;
  patchLog: PatchLogEntry[] = [];
  editorOpen = false;
  lastError: string | null = null;

  private slots: Record<string, HTMLElement>;

  constructor(root: HTMLElement, inputs: SessionInputs, client: ApiClient) {
    this.root = root;
    this.state = new SessionState(inputs);
    this.client = client;
    this.slots = this.buildLayout();
  }

  /** Load originals, first lint/preview/recommend, then render everything. */
  static async boot(root: HTMLElement, inputs: SessionInputs, client: ApiClient): Promise<App> {
    const app = new App(root, inputs, client);
    await app.loadOriginal();
    await app.refreshWorking();
    await app.refreshRecommendations();
    app.render();
    return app;
  }

  private buildLayout(): Record<string, HTMLElement> {
    this.root.replaceChildren();
    const slots: Record<string, HTMLElement> = {};
    const grid = document.createElement("div");
    grid.className = "app-grid";
    for (const name of ["editor", "maps", "recommendation", "violations", "options"]) {
      const section = document.createElement("div");
      section.className = `slot slot-${name}`;
      slots[name] = section;
      grid.appendChild(section);
    }
    const errorBar = document.createElement("div");
    errorBar.className = "error-bar";
    slots.error = errorBar;
    this.root.append(errorBar, grid);
    return slots;
  }

  async loadOriginal(): Promise<void> {
    const inputs = this.state.originalInputs();
    const lintRes = await this.guard(() => this.client.lint(inputs));
    if (lintRes && lintRes !== STALE) {
      this.state.originalScores = lintRes.report.scores;
    }
    if (inputs.geojson) {
      const previewRes = await this.guard(() => this.client.preview(inputs));
      if (previewRes && previewRes !== STALE) {
        this.state.previewOriginal = previewRes.preview;
      }
    }
  }

  /** Re-lint and re-preview the working spec; called after every change. */
  async refreshWorking(): Promise<void> {
    const inputs = this.state.workingInputs();
    const lintRes = await this.guard(() => this.client.lint(inputs));
    if (lintRes && lintRes !== STALE) {
      this.state.lastReport = lintRes.report;
      this.state.syntaxError = null;
    }
    if (inputs.geojson && !this.state.syntaxError) {
      const previewRes = await this.guard(() => this.client.preview(inputs));
      if (previewRes && previewRes !== STALE) {
        this.state.previewWorking = previewRes.preview;
      }
    }
  }

  async refreshRecommendations(): Promise<void> {
    const inputs = this.state.workingInputs();
    if (!inputs.geojson) return;
    const res = await this.guard(() => this.client.recommend(inputs));
    if (res && res !== STALE) {
      this.state.scoreTable = res.scores;
      this.state.recommendedK = res.recommended_k;
      this.state.metric = res.metric;
    }
  }

  /** Apply one fix option for a rule and fold the result into the session. */
  async applyFix(code: string, optionIndex: number): Promise<void> {
    const report = this.state.lastReport;
    const diag = report?.diagnostics.find((d) => d.code === code);
    const res = await this.guard(() =>
      this.client.fix(this.state.workingInputs(), { [code]: optionIndex }),
    );
    if (!res || res === STALE) return;
    this.integrateFix(res, code, diag?.fixes.map((f) => f.label) ?? []);
    await this.refreshWorking();
    await this.refreshRecommendations();
    this.render();
  }

  private integrateFix(res: FixResponse, code: string, optionLabels: string[]): void {
    this.state.workingSpecText = res.spec;
    this.state.lastReport = res.report;
    for (const applied of res.patches) {
      this.patchLog.push({
        code: applied.code,
        label: applied.label,
        patches: applied.patches.map((p) => ({ op: p.op, path: p.path })),
      });
      this.state.markFixed(applied.code, applied.label, optionLabels);
    }
    if (!res.patches.length && optionLabels.length) {
      // fix was a no-op (rule already satisfied); still retain the settings
      this.state.markFixed(code, optionLabels[0], optionLabels);
    }
  }

  /** Manual edit of the spec text (editor panel or options panel). */
  async setWorkingSpec(text: string): Promise<void> {
    this.state.workingSpecText = text;
    await this.refreshWorking();
    await this.refreshRecommendations();
    this.render();
  }

  /** Preview a candidate classification without touching the spec. */
  async hoverPreview(override: ClassificationOverride): Promise<void> {
    const res = await this.guard(() =>
      this.client.preview(this.state.workingInputs(), override),
    );
    if (!res || res === STALE) return;
    this.hoveredPreview = res.preview;
    renderMaps(this.slots.maps, this);
  }

  clearHoverPreview(): void {
    if (!this.hoveredPreview) return;
    this.hoveredPreview = null;
    renderMaps(this.slots.maps, this);
  }

  private async guard<T>(call: () => Promise<T>): Promise<T | null> {
    try {
      const result = await call();
      this.lastError = null;
      return result;
    } catch (err) {
      if (err instanceof ServiceError) {
        if (err.status === 422 && err.body?.line != null) {
          this.state.syntaxError = {
            line: err.body.line,
            col: err.body.col ?? 1,
            detail: err.body.detail ?? err.body.error,
          };
          this.editorOpen = true;
        } else {
          this.lastError = err.message;
        }
      } else {
        this.lastError = String(err);
      }
      return null;
    }
  }

  render(): void {
    this.slots.error.textContent = this.lastError ?? "";
    this.slots.error.classList.toggle("visible", this.lastError != null);
    renderEditor(this.slots.editor, this);
    renderMaps(this.slots.maps, this);
    renderRecommendation(this.slots.recommendation, this);
    renderViolations(this.slots.violations, this);
    renderOptions(this.slots.options, this);
  }
}
