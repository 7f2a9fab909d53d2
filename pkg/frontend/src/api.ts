// Typed client for the query-by-example HTTP service.

export type MqgEdge = {
  idx: number;
  subj: string;
  label: string;
  obj: string;
  weight: number;
  depth: number;
};

export type AnswerRow = { entities: string[]; score: number; rank: number };

export type QueryStats = {
  nodes_evaluated: number;
  nodes_pruned: number;
  millis: number;
};

export type QueryResponse = {
  answers: AnswerRow[];
  mqg: MqgEdge[];
  stats: QueryStats;
};

export type QueryParams = { k: number; kprime: number; d: number; r: number };

export type HealthResponse = {
  status: string;
  entities: number;
  edges: number;
};

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function json<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  if (!res.ok) {
    let message = res.statusText;
    try {
      const body = (await res.json()) as { error?: string };
      if (body.error) message = body.error;
    } catch {
      // non-JSON error body, keep the status text
    }
    throw new ApiError(res.status, message);
  }
  return res.json() as Promise<T>;
}

export interface Client {
  health(): Promise<HealthResponse>;
  autocomplete(prefix: string, limit?: number): Promise<string[]>;
  query(tuples: string[][], params?: Partial<QueryParams>): Promise<QueryResponse>;
}

export function makeClient(baseUrl: string): Client {
  return {
    health: () => json<HealthResponse>(`${baseUrl}/api/health`),
    autocomplete: async (prefix, limit = 10) => {
      const q = encodeURIComponent(prefix);
      const res = await json<{ matches: string[] }>(
        `${baseUrl}/api/autocomplete?q=${q}&limit=${limit}`,
      );
      return res.matches;
    },
    query: (tuples, params = {}) =>
      json<QueryResponse>(`${baseUrl}/api/query`, {
        method: "POST",
        body: JSON.stringify({ tuples, ...params }),
      }),
  };
}

// Renders an MQG payload in the same tab-separated shape the CLI dumps,
// one line per edge, so the two can be compared directly.
export function mqgDumpLines(mqg: MqgEdge[]): string[] {
  return [...mqg]
    .sort((a, b) => a.idx - b.idx)
    .map(
      (e) =>
        `${e.idx}\t${e.subj}\t${e.label}\t${e.obj}\t` +
        `${formatWeight(e.weight)}\t${e.depth}`,
    );
}

export function formatWeight(w: number): string {
  // Integral weights keep a trailing ".0" to match the service's JSON
  // number formatting on the Python side.
  return Number.isInteger(w) ? `${w}.0` : String(w);
}
