import type { BoundRequest, BoundResponse, EnvelopeResponse, Meta, VolcanoPoint } from "./types.js";

async function getJson<T>(path: string): Promise<T> {
  const res = await fetch(path, { headers: { Accept: "application/json" } });
  if (!res.ok) {
    throw new Error(`HTTP ${res.status} on ${path}`);
  }
  return (await res.json()) as T;
}

/** Typed client for the bounds server; all numbers displayed in the UI come
 *  from these responses, never from client-side computation. */
export class ApiClient {
  constructor(private readonly base: string = "") {}

  fetchMeta(): Promise<Meta> {
    return getJson<Meta>(`${this.base}/api/meta`);
  }

  async fetchPoints(): Promise<VolcanoPoint[]> {
    const body = await getJson<{ points: VolcanoPoint[] }>(`${this.base}/api/points`);
    return body.points;
  }

  async postBound(request: BoundRequest, signal?: AbortSignal): Promise<BoundResponse> {
    const res = await fetch(`${this.base}/api/bound`, {
      method: "POST",
      headers: { "Content-Type": "application/json", Accept: "application/json" },
      body: JSON.stringify(request),
      signal,
    });
    if (!res.ok) {
      throw new Error(`HTTP ${res.status} on /api/bound`);
    }
    return (await res.json()) as BoundResponse;
  }

  fetchEnvelope(method: string, template?: string): Promise<EnvelopeResponse> {
    const params = new URLSearchParams({ method });
    if (template) {
      params.set("template", template);
    }
    return getJson<EnvelopeResponse>(`${this.base}/api/envelope?${params.toString()}`);
  }
}
