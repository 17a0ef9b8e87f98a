/** Typed client for the workbench API.
 *
 * Test-part quarantine lives here: any request naming part=test throws
 * unless the caller explicitly passes the allowTest capability, which only
 * the final-evaluation screen holds behind its confirmation step.
 */

import type {
  ApiErrorBody,
  ClassesResponse,
  InductResponse,
  MisclassifiedResponse,
  PartName,
  QueryEvalResponse,
  ReportResponse,
  RulesResponse,
  SortColumn,
  SortDirection,
  StatsResponse,
} from "./types.js";

export class ApiError extends Error {
  readonly code: ApiErrorBody["code"];
  readonly position?: number;
  readonly status: number;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.code = body.code;
    this.position = body.position;
    this.status = status;
  }
}

export class TestPartBlocked extends Error {
  constructor() {
    super("test-part requests are reserved for the final evaluation screen");
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface StatsParams {
  class: string;
  part?: PartName;
  sort?: SortColumn | "precision" | "recall" | "f1";
  dir?: SortDirection;
  max_n?: number;
  min_df?: number;
  limit?: number;
  offset?: number;
}

export class Client {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(base = "", fetchFn: FetchLike = (u, i) => fetch(u, i)) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private guardPart(part: PartName | undefined, allowTest: boolean): void {
    if (part === "test" && !allowTest) {
      throw new TestPartBlocked();
    }
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.base + path, init);
    const body = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, body as ApiErrorBody);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  getClasses(): Promise<ClassesResponse> {
    return this.request("/api/classes");
  }

  async getStats(params: StatsParams, allowTest = false): Promise<StatsResponse> {
    this.guardPart(params.part, allowTest);
    const q = new URLSearchParams();
    for (const [key, value] of Object.entries(params)) {
      if (value !== undefined) q.set(key, String(value));
    }
    return this.request(`/api/stats?${q.toString()}`);
  }

  async evalQuery(
    body: { query: string; part?: PartName; class?: string; sample_limit?: number },
    allowTest = false,
  ): Promise<QueryEvalResponse> {
    this.guardPart(body.part, allowTest);
    return this.post("/api/query/eval", body);
  }

  getRules(): Promise<RulesResponse> {
    return this.request("/api/rules");
  }

  addRule(body: { class: string; query: string; note?: string }): Promise<{ id: string; revision: number }> {
    return this.post("/api/rules", body);
  }

  deleteRule(id: string): Promise<{ revision: number }> {
    return this.request(`/api/rules/${encodeURIComponent(id)}`, { method: "DELETE" });
  }

  async getReport(part: PartName, allowTest = false): Promise<ReportResponse> {
    this.guardPart(part, allowTest);
    return this.request(`/api/report?part=${part}`);
  }

  async getMisclassified(
    className: string,
    part: PartName,
    allowTest = false,
  ): Promise<MisclassifiedResponse> {
    this.guardPart(part, allowTest);
    const q = new URLSearchParams({ class: className, part });
    return this.request(`/api/misclassified?${q.toString()}`);
  }

  induct(className: string, params: Record<string, number>): Promise<InductResponse> {
    return this.post("/api/induct", { class: className, params });
  }

  inductAccept(className: string, queries: string[], seed: number): Promise<{ ids: string[]; revision: number }> {
    return this.post("/api/induct/accept", { class: className, queries, seed });
  }

  saveProject(): Promise<{ path: string; revision: number }> {
    return this.post("/api/project/save", {});
  }

  getDoc(id: string): Promise<{ id: string; text: string; labels: string[]; part: PartName }> {
    return this.request(`/api/doc/${encodeURIComponent(id)}`);
  }
}
