/** Typed client for the test service HTTP API. */

export interface TestInfo {
  test_id: string;
  language: string;
  n_items: number;
  batch_size: number;
}

export interface TrialPayload {
  item_id: string;
  text: string;
  display_ms: number;
  respond_by: number;
}

export type NextResult = TrialPayload | { status: "complete" };

export interface ResponseBody {
  item_id: string;
  answer: "real" | "fake" | "timeout";
  rt_ms: number;
}

export interface Ack {
  status: string;
  item_id: string;
  answer: string;
  rt_ms: number;
}

export interface ScoreReport {
  session_id: string;
  accuracy: number;
  batch_accuracies: number[];
  hit_rate: number;
  correct_rejection_rate: number;
  n_trials: number;
  n_missed: number;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export function isComplete(next: NextResult): next is { status: "complete" } {
  return "status" in next && next.status === "complete";
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

const sleep = (ms: number) => new Promise((r) => setTimeout(r, ms));

export class ApiClient {
  constructor(
    private base: string,
    private fetchFn: FetchLike = (u, i) => fetch(u, i),
  ) {
    this.base = base.replace(/\/+$/, "");
  }

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "Content-Type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const resp = await this.fetchFn(this.base + path, init);
    const payload = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      throw new ApiError(resp.status, (payload as { error?: string }).error ?? `HTTP ${resp.status}`);
    }
    return payload as T;
  }

  async listTests(): Promise<TestInfo[]> {
    const payload = await this.call<{ tests: TestInfo[] }>("GET", "/tests");
    return payload.tests;
  }

  createSession(testId: string, opts: { seed?: number; nativeLang?: string } = {}) {
    return this.call<{ session_id: string; n_trials: number }>("POST", "/sessions", {
      test_id: testId,
      ...(opts.seed !== undefined ? { seed: opts.seed } : {}),
      ...(opts.nativeLang !== undefined ? { native_lang: opts.nativeLang } : {}),
    });
  }

  nextTrial(sessionId: string): Promise<NextResult> {
    return this.call<NextResult>("GET", `/sessions/${sessionId}/next`);
  }

  /**
   * Submit one answer. Network failures are retried: the server re-acks
   * a duplicate of the last answered item, so retrying is safe even when
   * the first attempt landed and only its reply was lost.
   */
  async submitResponse(sessionId: string, body: ResponseBody, retries = 2): Promise<Ack> {
    let lastError: unknown;
    for (let attempt = 0; attempt <= retries; attempt++) {
      try {
        return await this.call<Ack>("POST", `/sessions/${sessionId}/response`, body);
      } catch (err) {
        if (err instanceof ApiError) throw err; // the server answered; don't hammer it
        lastError = err;
        if (attempt < retries) await sleep(150 * (attempt + 1));
      }
    }
    throw lastError;
  }

  finish(sessionId: string): Promise<ScoreReport> {
    return this.call<ScoreReport>("POST", `/sessions/${sessionId}/finish`);
  }
}
