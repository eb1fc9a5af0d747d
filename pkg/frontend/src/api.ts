// Service client. Stateless server: every call carries the full inputs.
// Each endpoint keeps a sequence counter so late responses from superseded
// requests are discarded instead of clobbering newer state.

import type {
  ClassificationOverride,
  ErrorResponse,
  FixResponse,
  LintResponse,
  PreviewResponse,
  RecommendResponse,
  SessionInputs,
} from "./types.js";

export class ServiceError extends Error {
  status: number;
  body: ErrorResponse | null;

  constructor(status: number, body: ErrorResponse | null) {
    super(body?.error ?? `service error ${status}`);
    this.status = status;
    this.body = body;
  }
}

export const STALE = Symbol("stale-response");
export type Maybe<T> = T | typeof STALE;

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private base: string;
  private fetchFn: FetchLike;
  private sequences = new Map<string, number>();
  private requestCounts = new Map<string, number>();

  constructor(base = "", fetchFn?: FetchLike) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  requestCount(endpoint: string): number {
    return this.requestCounts.get(endpoint) ?? 0;
  }

  private async post<T>(endpoint: string, body: unknown): Promise<Maybe<T>> {
    const seq = (this.sequences.get(endpoint) ?? 0) + 1;
    this.sequences.set(endpoint, seq);
    this.requestCounts.set(endpoint, (this.requestCounts.get(endpoint) ?? 0) + 1);
    const response = await this.fetchFn(this.base + endpoint, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (this.sequences.get(endpoint) !== seq) {
      return STALE; // a newer request went out while this one was in flight
    }
    if (!response.ok) {
      let parsed: ErrorResponse | null = null;
      try {
        parsed = (await response.json()) as ErrorResponse;
      } catch {
        parsed = null;
      }
      throw new ServiceError(response.status, parsed);
    }
    return (await response.json()) as T;
  }

  lint(inputs: SessionInputs): Promise<Maybe<LintResponse>> {
    return this.post<LintResponse>("/lint", inputs);
  }

  fix(
    inputs: SessionInputs,
    selections: "all" | Record<string, number>,
  ): Promise<Maybe<FixResponse>> {
    return this.post<FixResponse>("/fix", { ...inputs, selections });
  }

  recommend(inputs: SessionInputs): Promise<Maybe<RecommendResponse>> {
    return this.post<RecommendResponse>("/recommend", inputs);
  }

  preview(
    inputs: SessionInputs,
    classification?: ClassificationOverride,
  ): Promise<Maybe<PreviewResponse>> {
    const body = classification ? { ...inputs, classification } : inputs;
    return this.post<PreviewResponse>("/preview", body);
  }
}
