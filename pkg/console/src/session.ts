/** Client-side session state: history, engine choice, program buffer.
 *
 * The session never builds programs itself; every program it stores came
 * back from the service. History is append-only and lives entirely in the
 * client, so reloading the page starts fresh. At most one request is in
 * flight at a time in the UI; as a second guard every request carries an
 * id and responses that are no longer the latest are discarded.
 */

import type { Answer, Engine, ParamsUsed, RunResult, Series, Translation } from "./api.js";

/** The slice of the API client the session depends on. */
export interface SessionApi {
  qa(question: string, engine?: Engine): Promise<RunResult>;
  translate(question: string, engine?: Engine, fallback?: boolean): Promise<Translation>;
  execute(program: string): Promise<RunResult>;
}

export interface HistoryEntry {
  id: number;
  /** null when the entry came from a hand-edited program */
  question: string | null;
  program: string;
  answer: Answer;
  series: Series;
  params: ParamsUsed;
  engine: Engine;
  warnings: string[];
}

/** Result of re-translating the last question after an engine toggle. */
export interface ProgramDiff {
  question: string;
  before: string;
  after: string;
  changed: boolean;
  source: Engine;
  warnings: string[];
}

export class Session {
  readonly history: HistoryEntry[] = [];
  engine: Engine = "reference";
  programBuffer = "";
  private nextRequestId = 0;
  private latestRequestId = 0;
  private pending = false;

  constructor(private readonly api: SessionApi) {}

  /** True while a request is outstanding; the UI disables submit on it. */
  get busy(): boolean {
    return this.pending;
  }

  /** Empty input keeps submit disabled. */
  canSubmit(text: string): boolean {
    return text.trim().length > 0 && !this.pending;
  }

  /** Ask the service end to end; returns null for a discarded stale reply. */
  async submitQuestion(text: string): Promise<HistoryEntry | null> {
    const question = text.trim();
    if (question.length === 0) throw new Error("empty question");
    const result = await this.tracked(() => this.api.qa(question, this.engine));
    if (result === null) return null;
    return this.append(question, result);
  }

  /** Run an edited program; parse failures reject with the server error. */
  async runProgram(text: string): Promise<HistoryEntry | null> {
    this.programBuffer = text;
    const result = await this.tracked(() => this.api.execute(text));
    if (result === null) return null;
    return this.append(null, result);
  }

  /**
   * Flip reference <-> model, re-translate the latest question, and report
   * how the program changed. Returns null when no question was asked yet.
   */
  async toggleEngine(): Promise<ProgramDiff | null> {
    this.engine = this.engine === "reference" ? "model" : "reference";
    const last = [...this.history].reverse().find((entry) => entry.question !== null);
    if (!last || last.question === null) return null;
    const translation = await this.tracked(() =>
      this.api.translate(last.question as string, this.engine),
    );
    if (translation === null) return null;
    return {
      question: last.question,
      before: last.program,
      after: translation.program,
      changed: translation.program !== last.program,
      source: translation.source,
      warnings: translation.warnings,
    };
  }

  /** Latest two entries that both carry a series, for the overlay view. */
  comparable(): [HistoryEntry, HistoryEntry] | null {
    const withSeries = this.history.filter((entry) => entry.series.M_n.length > 0);
    if (withSeries.length < 2) return null;
    const a = withSeries[withSeries.length - 2];
    const b = withSeries[withSeries.length - 1];
    return a && b ? [a, b] : null;
  }

  private async tracked<T>(call: () => Promise<T>): Promise<T | null> {
    const requestId = ++this.nextRequestId;
    this.latestRequestId = requestId;
    this.pending = true;
    try {
      const result = await call();
      if (requestId !== this.latestRequestId) return null; // stale
      return result;
    } finally {
      if (requestId === this.latestRequestId) this.pending = false;
    }
  }

  private append(question: string | null, result: RunResult): HistoryEntry {
    const entry: HistoryEntry = {
      id: this.history.length,
      question,
      program: result.program,
      answer: result.answer,
      series: result.series,
      params: result.params_used,
      engine: this.engine,
      warnings: result.warnings,
    };
    this.history.push(entry);
    this.programBuffer = result.program;
    return entry;
  }
}
