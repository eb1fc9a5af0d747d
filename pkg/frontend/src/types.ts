// Wire types mirroring the service's response schemas ("api": 1).

export interface PatchOp {
  op: "add" | "replace" | "remove";
  path: string;
  value?: unknown;
}

export interface FixOption {
  label: string;
  patches: PatchOp[];
}

export interface Diagnostic {
  code: string;
  severity: "hard" | "soft";
  advisory: boolean;
  location: string;
  message: string;
  explanation: string;
  fixes: FixOption[];
  details: Record<string, unknown>;
}

export interface Scores {
  gvf: number | null;
  morans_i: number | null;
  k: number | null;
  method: string | null;
}

export interface Report {
  clean: boolean;
  diagnostics: Diagnostic[];
  scores: Scores | null;
  skipped: { code: string; reason: string }[];
  notes: string[];
}

export interface LintResponse {
  api: number;
  report: Report;
}

export interface FixResponse {
  api: number;
  spec: string;
  patches: { code: string; label: string; patches: PatchOp[] }[];
  report: Report;
  rounds: number;
}

export interface ScoreRow {
  method: string;
  k: number;
  gvf: number;
  morans_i: number | null;
}

export interface RecommendResponse {
  api: number;
  metric: "gvf" | "morans_i";
  scores: ScoreRow[];
  skipped: { method: string; k: number | null; reason: string }[];
  current: Scores | null;
  recommended_k: [number, number];
}

export interface PreviewRegion {
  id: string;
  fill: string;
  rings: [number, number][][];
}

export interface LegendEntry {
  color: string;
  label: string;
  count: number | null;
}

export interface Histogram {
  bin_edges: number[];
  counts: number[];
  breaks: number[];
  min: number;
  max: number;
}

export interface Preview {
  width: number;
  height: number;
  projection: string;
  projection_substituted: boolean;
  background: string;
  stroke: string | null;
  stroke_width: number;
  regions: PreviewRegion[];
  legend: LegendEntry[];
  legend_title: string | null;
  title: string | null;
  histogram: Histogram | null;
  scores: Scores | null;
}

export interface PreviewResponse {
  api: number;
  preview: Preview;
}

export interface ErrorResponse {
  api: number;
  error: string;
  line?: number;
  col?: number;
  detail?: string;
}

export interface SessionInputs {
  spec: string;
  geojson?: string;
  data?: string;
}

export type ClassificationOverride = { method: string; k: number };
