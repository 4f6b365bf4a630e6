// Typed client for the session service; the only network surface the UI uses.

export type Status = "computing" | "awaiting_answer" | "done" | "failed";

export interface LeadingEntry {
  ids: number[];
  probability: number;
}

export interface HistoryEntry {
  query: string[];
  answer: boolean;
}

export interface QPartitionSizes {
  dx: number;
  dnx: number;
  dz: number;
}

export interface Snapshot {
  id: string;
  status: Status;
  mode: string;
  sigma: number;
  params: {
    n_min: number;
    n_max: number | null;
    timeout_ms: number;
    pool_size: number | null;
    measure: string;
  };
  pending_query: string[] | null;
  qpartition_sizes: QPartitionSizes | null;
  leading: LeadingEntry[];
  history: HistoryEntry[];
  solution: string[] | null;
  solution_diagnosis: number[] | null;
  error: string | null;
}

export interface SessionRequest {
  dpi: string;
  element_probs?: string | null;
  uniform?: boolean;
  mode?: string;
  sigma?: number;
  nmin?: number;
  nmax?: number | null;
  timeout_ms?: number;
  pool_size?: number;
  measure?: string;
}

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function parseError(resp: Response): Promise<never> {
  let detail = resp.statusText;
  try {
    const body = await resp.json();
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(resp.status, detail);
}

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  async createSession(request: SessionRequest): Promise<{ id: string; status: Status }> {
    const resp = await this.fetchFn(`${this.base}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!resp.ok) await parseError(resp);
    return resp.json();
  }

  async getSession(id: string): Promise<Snapshot> {
    const resp = await this.fetchFn(`${this.base}/sessions/${id}`);
    if (!resp.ok) await parseError(resp);
    return resp.json();
  }

  async answer(id: string, answer: boolean | "skip"): Promise<Snapshot> {
    const resp = await this.fetchFn(`${this.base}/sessions/${id}/answer`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ answer }),
    });
    if (!resp.ok) await parseError(resp);
    return resp.json();
  }

  async deleteSession(id: string): Promise<void> {
    const resp = await this.fetchFn(`${this.base}/sessions/${id}`, { method: "DELETE" });
    if (!resp.ok && resp.status !== 404) await parseError(resp);
  }

  async healthz(): Promise<boolean> {
    try {
      const resp = await this.fetchFn(`${this.base}/healthz`);
      return resp.ok;
    } catch {
      return false;
    }
  }
}
