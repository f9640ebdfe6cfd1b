/**
 * Client for the classification service. At most one request is relevant at
 * a time: a newer classify call aborts the in-flight one, and responses that
 * arrive for superseded requests are discarded (newest wins).
 */

import type { StrokePayload } from "./schema";

export interface Candidate {
  symbol: string;
  score: number;
}

export interface ClassifyResponse {
  candidates: Candidate[];
  latency_ms: number;
}

export class StaleResponseError extends Error {
  constructor() {
    super("superseded by a newer request");
  }
}

export class ClassifyClient {
  private seq = 0;
  private controller: AbortController | null = null;

  constructor(private baseUrl: () => string) {}

  async classify(
    payload: StrokePayload,
    k: number,
    mode: "asym" | "sym",
  ): Promise<ClassifyResponse> {
    const mySeq = ++this.seq;
    this.controller?.abort();
    this.controller = new AbortController();
    const url = `${this.baseUrl().replace(/\/$/, "")}/classify?k=${k}&mode=${mode}`;
    const resp = await fetch(url, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
      signal: this.controller.signal,
    });
    if (mySeq !== this.seq) {
      throw new StaleResponseError();
    }
    if (!resp.ok) {
      let detail = `service error (HTTP ${resp.status})`;
      try {
        const body = await resp.json();
        if (body && typeof body.error === "string") detail = body.error;
      } catch {
        // keep the status-based message
      }
      throw new Error(detail);
    }
    const body = (await resp.json()) as ClassifyResponse;
    if (mySeq !== this.seq) {
      throw new StaleResponseError();
    }
    return body;
  }

  async health(): Promise<{ model_loaded: boolean; n_symbols: number }> {
    const resp = await fetch(`${this.baseUrl().replace(/\/$/, "")}/health`);
    return resp.json();
  }
}
