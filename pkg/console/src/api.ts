/** Typed client for the box-model QA service JSON API. */

export type Engine = "reference" | "model";

export interface Translation {
  program: string;
  source: Engine;
  form_id: number | null;
  warnings: string[];
}

export interface Answer {
  kind: "number" | "bool";
  value: number | boolean;
  unit: string | null;
}

export interface Series {
  steps: number[];
  variable: string;
  values: number[];
  M_n: number[];
}

export interface ParamsUsed {
  Fwn: number;
  Fws: number;
  M_ek: number;
  D_low0: number;
  epsilon: number;
  N: number;
  dt: number;
}

export interface RunResult {
  program: string;
  answer: Answer;
  warnings: string[];
  series: Series;
  params_used: ParamsUsed;
  source?: Engine;
  form_id?: number | null;
}

export interface ParseErrorDetail {
  message: string;
  position?: number;
  expected?: string;
  found?: string;
}

export interface FormSummary {
  form_id: number;
  template: string;
  slots: Record<string, string>;
  synonyms: Record<string, string[]>;
  clause_counts: number[];
  variant_count: number;
}

export interface FormRegistry {
  forms: FormSummary[];
}

/** Non-2xx response; ``detail`` is the server's parsed error payload. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(`request failed with status ${status}`);
    this.name = "ApiError";
  }
}

/** The parse-error body of a 422 from /api/execute, if that is what this is. */
export function parseErrorDetail(error: unknown): ParseErrorDetail | null {
  if (!(error instanceof ApiError) || error.status !== 422) return null;
  const detail = error.detail;
  if (typeof detail !== "object" || detail === null) return null;
  const record = detail as Record<string, unknown>;
  if (typeof record.message !== "string") return null;
  return record as unknown as ParseErrorDetail;
}

export class Client {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, (payload as { detail?: unknown }).detail);
    }
    return payload as T;
  }

  qa(question: string, engine: Engine = "reference"): Promise<RunResult> {
    return this.request("POST", "/api/qa", { question, engine });
  }

  translate(
    question: string,
    engine: Engine = "reference",
    fallback = true,
  ): Promise<Translation> {
    return this.request("POST", "/api/translate", { question, engine, fallback });
  }

  execute(program: string): Promise<RunResult> {
    return this.request("POST", "/api/execute", { program });
  }

  forms(): Promise<FormRegistry> {
    return this.request("GET", "/api/forms");
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/healthz");
  }
}
