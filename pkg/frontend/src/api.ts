/** Thin client for the service's four endpoints.
 *
 * Concurrency contract: at most one in-flight request per endpoint.
 * Starting a new request aborts the previous one, and every response is
 * checked against a per-endpoint sequence number so a slow or aborted
 * reply can never overwrite newer state ("stale" results).
 */

import type {
  AttackKind,
  AttackResponse,
  HealthResponse,
  NormalizeResponse,
  ScoreResponse,
} from "./types.js";

export type ApiResult<T> =
  | { kind: "ok"; data: T }
  | { kind: "stale" }
  | { kind: "http"; status: number; message: string; body: Record<string, unknown> | null }
  | { kind: "unreachable"; message: string };

export interface ScorePayload {
  text: string;
  normalize?: boolean;
  session_id?: string;
  meta?: Record<string, unknown>;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private seq: Record<string, number> = {};
  private inFlight: Record<string, AbortController | undefined> = {};

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  health(): Promise<ApiResult<HealthResponse>> {
    return this.request<HealthResponse>("/health", "GET");
  }

  normalize(text: string, passes?: string[]): Promise<ApiResult<NormalizeResponse>> {
    const body = passes === undefined ? { text } : { text, passes };
    return this.request<NormalizeResponse>("/normalize", "POST", body);
  }

  attack(
    text: string,
    kind: AttackKind,
    seed?: number,
    params?: Record<string, unknown>,
  ): Promise<ApiResult<AttackResponse>> {
    const body: Record<string, unknown> = { text, kind };
    if (seed !== undefined) {
      body.seed = seed;
    }
    if (params !== undefined) {
      body.params = params;
    }
    return this.request<AttackResponse>("/attack", "POST", body);
  }

  score(payload: ScorePayload): Promise<ApiResult<ScoreResponse>> {
    return this.request<ScoreResponse>("/score", "POST", payload);
  }

  private async request<T>(
    endpoint: string,
    method: "GET" | "POST",
    body?: unknown,
  ): Promise<ApiResult<T>> {
    const mySeq = (this.seq[endpoint] = (this.seq[endpoint] ?? 0) + 1);
    this.inFlight[endpoint]?.abort();
    const controller = new AbortController();
    this.inFlight[endpoint] = controller;

    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + endpoint, {
        method,
        signal: controller.signal,
        ...(body === undefined
          ? {}
          : { headers: { "content-type": "application/json" }, body: JSON.stringify(body) }),
      });
    } catch (error) {
      if (mySeq !== this.seq[endpoint] || (error as { name?: string }).name === "AbortError") {
        return { kind: "stale" };
      }
      return { kind: "unreachable", message: String(error) };
    }
    if (mySeq !== this.seq[endpoint]) {
      return { kind: "stale" };
    }

    let parsed: unknown = null;
    try {
      parsed = await response.json();
    } catch {
      parsed = null;
    }
    if (mySeq !== this.seq[endpoint]) {
      return { kind: "stale" };
    }
    const bodyObj =
      parsed !== null && typeof parsed === "object" && !Array.isArray(parsed)
        ? (parsed as Record<string, unknown>)
        : null;
    if (!response.ok) {
      const message =
        bodyObj && typeof bodyObj.error === "string" ? bodyObj.error : `HTTP ${response.status}`;
      return { kind: "http", status: response.status, message, body: bodyObj };
    }
    return { kind: "ok", data: parsed as T };
  }
}
