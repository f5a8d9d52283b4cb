// Typed client for the consultation service. All numeric state lives on
// the server; this module only moves JSON.

export interface ApiErrorBody {
  code: string;
  message: string;
  detail?: unknown;
}

export class ApiError extends Error {
  constructor(readonly status: number, readonly body: ApiErrorBody) {
    super(body.message);
    this.name = "ApiError";
  }

  get code(): string {
    return this.body.code;
  }
}

export interface LegSummary {
  id: string;
  events: string[];
}

export interface NetEdge {
  a: string;
  b: string;
  shared: string[];
}

export interface CausalLink {
  from: string;
  to: string;
}

export interface NetSummary {
  legs: LegSummary[];
  events: string[];
  edges: NetEdge[];
  causal_links: CausalLink[];
  updates: number;
}

export interface EventMarginal {
  name: string;
  probability: number;
}

export interface LegDetail {
  id: string;
  events: EventMarginal[];
}

export interface MarginalChange {
  before: number;
  after: number;
}

export interface UpdateSummary {
  index: number;
  source_leg: string;
  constraints: Record<string, number>;
  touched: string[];
  propagation_order: string[];
  marginal_changes: Record<string, Record<string, MarginalChange>>;
}

export interface ExplainClause {
  explainer: string;
  direction: string;
  reported_correlation: number;
  hypothesis_before: number;
  hypothesis_after: number;
  explainer_before: number;
  explainer_after: number;
  source_leg: string;
  update_index: number;
  hard_evidence: string | null;
}

export interface ExplanationPayload {
  hypothesis: string;
  direction: string;
  kind: string;
  hypothesis_before: number;
  hypothesis_after: number;
  clauses: ExplainClause[];
}

export interface ExplainResponse {
  explanation: ExplanationPayload;
  rendered_text: string;
}

export interface ExplainRequest {
  hypothesis: string;
  leg: string;
  scope: string;
  filter: string;
  detail: string;
  when?: number | string;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private fetchFn: FetchLike;

  constructor(private base: string = "", fetchFn?: FetchLike) {
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.base + path, init);
    const text = await response.text();
    const data = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const fallback: ApiErrorBody = { code: "http_error", message: `HTTP ${response.status}` };
      throw new ApiError(response.status, (data as ApiErrorBody) ?? fallback);
    }
    return data as T;
  }

  listSessions(): Promise<{ sessions: string[] }> {
    return this.request("GET", "/api/sessions");
  }

  createSession(kb: unknown): Promise<{ id: string; legs: string[] }> {
    return this.request("POST", "/api/sessions", kb);
  }

  net(session: string): Promise<NetSummary> {
    return this.request("GET", `/api/sessions/${session}/net`);
  }

  leg(session: string, legId: string): Promise<LegDetail> {
    return this.request("GET", `/api/sessions/${session}/legs/${encodeURIComponent(legId)}`);
  }

  evidence(
    session: string,
    leg: string,
    constraints: Record<string, number>,
  ): Promise<UpdateSummary> {
    return this.request("POST", `/api/sessions/${session}/evidence`, { leg, constraints });
  }

  explain(session: string, body: ExplainRequest): Promise<ExplainResponse> {
    return this.request("POST", `/api/sessions/${session}/explain`, body);
  }

  history(session: string): Promise<{ updates: UpdateSummary[] }> {
    return this.request("GET", `/api/sessions/${session}/history`);
  }

  structure(session: string, links: CausalLink[]): Promise<{ links: CausalLink[] }> {
    return this.request("PUT", `/api/sessions/${session}/structure`, { links });
  }

  initialize(session: string): Promise<{ status: string; updates: number }> {
    return this.request("POST", `/api/sessions/${session}/initialize`);
  }
}
