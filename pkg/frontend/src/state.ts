// Session state. The original spec is pinned at load time and never mutated;
// only the working copy moves as fixes land.

import type { Preview, Report, ScoreRow, SessionInputs } from "./types.js";

export interface FixedRule {
  code: string;
  label: string;
  options: string[]; // retained so the settings stay adjustable after fixing
}

export class SessionState {
  readonly originalSpecText: string;
  readonly geojson?: string;
  readonly data?: string;

  workingSpecText: string;
  lastReport: Report | null = null;
  previewOriginal: Preview | null = null;
  previewWorking: Preview | null = null;
  scoreTable: ScoreRow[] = [];
  recommendedK: [number, number] = [3, 7];
  metric: "gvf" | "morans_i" = "gvf";
  originalScores: Report["scores"] = null;
  fixedRules: FixedRule[] = [];
  syntaxError: { line: number; col: number; detail: string } | null = null;

  constructor(inputs: SessionInputs) {
    this.originalSpecText = inputs.spec;
    this.workingSpecText = inputs.spec;
    this.geojson = inputs.geojson;
    this.data = inputs.data;
  }

  workingInputs(): SessionInputs {
    return { spec: this.workingSpecText, geojson: this.geojson, data: this.data };
  }

  originalInputs(): SessionInputs {
    return { spec: this.originalSpecText, geojson: this.geojson, data: this.data };
  }

  markFixed(code: string, label: string, options: string[]): void {
    if (!this.fixedRules.some((f) => f.code === code)) {
      this.fixedRules.push({ code, label, options });
    }
  }

  /** Score deltas between the original map and the working one. */
  scoreDelta(): { gvf: number | null; morans_i: number | null } {
    const a = this.originalScores;
    const b = this.lastReport?.scores ?? null;
    return {
      gvf: a?.gvf != null && b?.gvf != null ? b.gvf - a.gvf : null,
      morans_i:
        a?.morans_i != null && b?.morans_i != null ? b.morans_i - a.morans_i : null,
    };
  }
}
