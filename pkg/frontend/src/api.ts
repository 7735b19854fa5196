import type { CorpusSegment, DetectionReport, IngestResponse } from "./types";

// the console is served from /ui on the engine itself, so API routes are
// one level up; override for dev servers hosted elsewhere
export let API_BASE = "..";

export function setApiBase(base: string): void {
  API_BASE = base;
}

export class ApiError extends Error {
  constructor(
    message: string,
    public status: number,
  ) {
    super(message);
  }

  get emptyIndex(): boolean {
    return this.status === 409;
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  let res: Response;
  try {
    res = await fetch(`${API_BASE}${path}`, init);
  } catch (err) {
    if (err instanceof DOMException && err.name === "AbortError") throw err;
    throw new ApiError("engine unreachable, is the server running?", 0);
  }
  const body = await res.json().catch(() => ({}));
  if (!res.ok) {
    const message =
      typeof body.error === "string" ? body.error : `request failed (${res.status})`;
    throw new ApiError(message, res.status);
  }
  return body as T;
}

export function detect(
  text: string,
  k: number,
  nprobe: number | null,
  signal?: AbortSignal,
): Promise<DetectionReport> {
  const payload: Record<string, unknown> = { text, k };
  if (nprobe !== null) payload.nprobe = nprobe;
  return request<DetectionReport>("/detect", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
    signal,
  });
}

export function ingest(corpus: CorpusSegment[]): Promise<IngestResponse> {
  return request<IngestResponse>("/ingest", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ corpus }),
  });
}

export function health(): Promise<{ status: string }> {
  return request("/health");
}
