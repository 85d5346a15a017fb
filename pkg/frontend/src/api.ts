import type {
  CompareReport,
  DetailPayload,
  MatricesPayload,
  ProgressEvent,
  RunRecord,
  SuggestionPayload,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

/**
 * Thin typed client over the service HTTP API. All dashboard data flows
 * through here; the views never compute statistics themselves.
 */
export class ApiClient {
  constructor(
    private base: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        detail = (await resp.json()).detail ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return resp.json() as Promise<T>;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  uploadDataset(name: string, edgeList: string, directedness: string) {
    return this.post<{ graph_ref: string; nodes: number; arcs: number }>("/datasets", {
      name,
      edge_list: edgeList,
      directedness,
    });
  }

  createRun(body: Record<string, unknown>) {
    return this.post<{ run_id: string }>("/runs", body);
  }

  getRun(runId: string) {
    return this.request<RunRecord>(`/runs/${runId}`);
  }

  listRuns() {
    return this.request<RunRecord[]>("/runs");
  }

  async waitForRun(runId: string, timeoutMs = 60_000, pollMs = 100): Promise<RunRecord> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const record = await this.getRun(runId);
      if (record.status === "done") return record;
      if (record.status === "failed") throw new ApiError(500, `run ${runId} failed`);
      if (Date.now() > deadline) throw new ApiError(504, `run ${runId} timed out`);
      await new Promise((r) => setTimeout(r, pollMs));
    }
  }

  matrices(runId: string, step: number, opts: { m?: number; mode?: string } = {}) {
    const params = new URLSearchParams({ step: String(step) });
    if (opts.m !== undefined) params.set("m", String(opts.m));
    if (opts.mode !== undefined) params.set("mode", opts.mode);
    return this.request<MatricesPayload>(`/runs/${runId}/matrices?${params}`);
  }

  detail(runId: string, rect: [number, number, number, number], step: number, m?: number) {
    const params = new URLSearchParams({
      row0: String(rect[0]),
      col0: String(rect[1]),
      row1: String(rect[2]),
      col1: String(rect[3]),
      step: String(step),
    });
    if (m !== undefined) params.set("m", String(m));
    return this.request<DetailPayload>(`/runs/${runId}/detail?${params}`);
  }

  suggestion(runId: string, n: number) {
    return this.request<SuggestionPayload>(`/runs/${runId}/suggestion?n=${n}`);
  }

  submitModified(runId: string, removals: number[], promotions: number[], n: number) {
    return this.post<{ run_id: string }>(`/runs/${runId}/modified`, {
      accepted_removals: removals,
      accepted_promotions: promotions,
      n,
    });
  }

  compare(a: string, b: string) {
    return this.request<CompareReport>(`/compare?a=${a}&b=${b}`);
  }

  /** Consume the SSE progress stream, invoking onEvent per event. */
  async progress(runId: string, onEvent: (e: ProgressEvent) => void): Promise<void> {
    const resp = await this.fetchImpl(`${this.base}/runs/${runId}/progress`);
    if (!resp.ok || resp.body === null) {
      throw new ApiError(resp.status, "progress stream unavailable");
    }
    const reader = resp.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      let idx;
      while ((idx = buffer.indexOf("\n\n")) >= 0) {
        const chunk = buffer.slice(0, idx);
        buffer = buffer.slice(idx + 2);
        for (const line of chunk.split("\n")) {
          if (line.startsWith("data: ")) {
            onEvent(JSON.parse(line.slice(6)) as ProgressEvent);
          }
        }
      }
    }
  }
}
