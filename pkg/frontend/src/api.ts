// Typed client for the model-engine wire interface. Every UI action goes
// through here; nothing in the frontend computes truth values itself.

export interface PendingChoice {
  atom: string;
  formula: string;
  choices: string[];
}

export interface CommandResponse {
  output: string;
  pending: PendingChoice | null;
  data: Record<string, unknown>;
}

export interface CreateSessionResponse {
  session_id: string;
  report: string;
}

export interface SessionOptions {
  name?: string;
  depth?: number;
  mode?: "paper" | "exhaustive";
  batchPolicy?: "leave" | "force-true" | "force-false";
}

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      const detail =
        typeof payload?.detail === "string" ? payload.detail : response.statusText;
      throw new ApiError(detail, response.status);
    }
    return payload as T;
  }

  createSession(theory: string, options: SessionOptions = {}): Promise<CreateSessionResponse> {
    return this.request("POST", "/sessions", {
      theory,
      name: options.name ?? null,
      depth: options.depth ?? 2,
      mode: options.mode ?? "paper",
      batchPolicy: options.batchPolicy ?? "leave",
    });
  }

  getModel(id: string): Promise<CommandResponse> {
    return this.request("GET", `/sessions/${id}/model`);
  }

  evalFormula(
    id: string,
    formula: string,
    world?: string,
    time?: string,
    mode?: string,
  ): Promise<CommandResponse> {
    return this.request("POST", `/sessions/${id}/eval`, {
      formula,
      world: world ?? null,
      time: time ?? null,
      mode: mode ?? null,
    });
  }

  force(id: string, atom: string, value: "true" | "false"): Promise<CommandResponse> {
    return this.request("POST", `/sessions/${id}/force`, { atom, value });
  }

  addElement(id: string, sort: string, name: string): Promise<CommandResponse> {
    return this.request("POST", `/sessions/${id}/add`, { sort, name });
  }

  eq(id: string, left: string, right: string, force: boolean): Promise<CommandResponse> {
    return this.request("POST", `/sessions/${id}/eq`, { left, right, force });
  }

  undo(id: string): Promise<CommandResponse> {
    return this.request("POST", `/sessions/${id}/undo`);
  }

  history(id: string): Promise<CommandResponse> {
    return this.request("GET", `/sessions/${id}/history`);
  }

  worlds(id: string): Promise<CommandResponse> {
    return this.request("GET", `/sessions/${id}/worlds`);
  }

  truthset(id: string, formula: string, time?: string, mode?: string): Promise<CommandResponse> {
    const params = new URLSearchParams({ f: formula });
    if (time) params.set("time", time);
    if (mode) params.set("mode", mode);
    return this.request("GET", `/sessions/${id}/truthset?${params.toString()}`);
  }

  command(id: string, line: string): Promise<CommandResponse> {
    return this.request("POST", `/sessions/${id}/command`, { line });
  }
}
