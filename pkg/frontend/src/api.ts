/** Thin fetch wrapper over the inference service endpoints. */

import type {
  CommentRequest,
  CommentResponse,
  HealthResponse,
  LegalResponse,
} from "./types.js";

export class ApiError extends Error {
  kind: string;
  status: number;

  constructor(kind: string, detail: string, status: number) {
    super(detail);
    this.kind = kind;
    this.status = status;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private base: string;
  private fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.fetchFn(`${this.base}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    const payload = await resp.json();
    if (!resp.ok) {
      const err = payload?.error ?? {};
      throw new ApiError(err.kind ?? "http-error", err.detail ?? resp.statusText, resp.status);
    }
    return payload as T;
  }

  comment(req: CommentRequest): Promise<CommentResponse> {
    return this.post<CommentResponse>("/api/comment", req);
  }

  async legal(fen: string): Promise<string[]> {
    const resp = await this.post<LegalResponse>("/api/legal", { fen });
    return resp.moves;
  }

  async health(): Promise<HealthResponse> {
    const resp = await this.fetchFn(`${this.base}/api/health`);
    return (await resp.json()) as HealthResponse;
  }
}
