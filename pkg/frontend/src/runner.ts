/** Drives one participant through a timed session.
 *
 * Per trial: fixation, stimulus shown at a frame boundary and hidden at
 * the first frame past display_ms (or instantly on keypress), responses
 * accepted through the grace window, then the answer goes to the server.
 * All stimulus timing runs on the frame clock; network round trips
 * happen strictly between trials, never while the stimulus clock runs.
 */

import { Ack, isComplete, NextResult, ResponseBody, ScoreReport, TestInfo, TrialPayload } from "./api.js";
import { FrameClock } from "./clock.js";
import { TrialView } from "./view.js";

/** The slice of the API client the runner needs (ApiClient satisfies it). */
export interface SessionApi {
  listTests(): Promise<TestInfo[]>;
  createSession(
    testId: string,
    opts?: { seed?: number; nativeLang?: string },
  ): Promise<{ session_id: string; n_trials: number }>;
  nextTrial(sessionId: string): Promise<NextResult>;
  submitResponse(sessionId: string, body: ResponseBody): Promise<Ack>;
  finish(sessionId: string): Promise<ScoreReport>;
}

export interface Keymap {
  realKey: string;
  fakeKey: string;
}

export interface RunnerConfig {
  keymap: Keymap;
  /** Blank fixation time before each stimulus. */
  itiMs: number;
  /** How long after stimulus offset a response still counts. */
  graceMs: number;
}

export const DEFAULT_CONFIG: RunnerConfig = {
  // left and right of the home row, one per hand
  keymap: { realKey: "l", fakeKey: "a" },
  itiMs: 500,
  graceMs: 1500,
};

interface Answered {
  answer: "real" | "fake";
  at: number;
}

export class TrialRunner {
  private config: RunnerConfig;

  constructor(
    private api: SessionApi,
    private view: TrialView,
    private clock: FrameClock,
    config: Partial<RunnerConfig> = {},
  ) {
    this.config = { ...DEFAULT_CONFIG, ...config };
    const { realKey, fakeKey } = this.config.keymap;
    if (realKey === fakeKey) throw new Error("real and fake keys must differ");
  }

  async run(
    testId: string,
    opts: { seed?: number; nativeLang?: string } = {},
  ): Promise<ScoreReport> {
    try {
      return await this.runInner(testId, opts);
    } catch (err) {
      this.view.showError(err instanceof Error ? err.message : String(err));
      throw err;
    }
  }

  private async runInner(
    testId: string,
    opts: { seed?: number; nativeLang?: string },
  ): Promise<ScoreReport> {
    const info = (await this.api.listTests()).find((t) => t.test_id === testId);
    if (!info) throw new Error(`unknown test ${testId}`);
    const totalBatches = Math.ceil(info.n_items / info.batch_size);

    const session = await this.api.createSession(testId, opts);
    const sid = session.session_id;
    let answered = 0;

    let next = await this.api.nextTrial(sid);
    while (!isComplete(next)) {
      this.view.setProgress(answered, session.n_trials);
      const body = await this.runTrial(next);
      await this.api.submitResponse(sid, body);
      answered++;
      if (answered % info.batch_size === 0 && answered < session.n_trials) {
        await this.view.showBreak(answered / info.batch_size, totalBatches);
      }
      next = await this.api.nextTrial(sid);
    }

    const report = await this.api.finish(sid);
    this.view.showCompletion(report);
    return report;
  }

  /** Timing-critical part; contains no network calls. */
  private async runTrial(trial: TrialPayload): Promise<ResponseBody> {
    this.view.showFixation();
    await this.waitMs(this.config.itiMs);

    const onset = await this.nextFrameTime();
    this.view.showStimulus(trial.text);
    let visible = true;
    const hide = () => {
      if (visible) {
        visible = false;
        this.view.hideStimulus();
      }
    };

    let answered: Answered | null = null;
    let wake = () => {};
    const detach = this.view.onKey((key) => {
      if (answered) return;
      const answer = this.mapKey(key);
      if (!answer) return;
      answered = { answer, at: this.clock.now() };
      hide(); // keypress ends the trial at once, no frame wait
      wake();
    });
    try {
      await this.waitUntil(onset + trial.display_ms, () => answered !== null,
                           (w) => (wake = w));
      hide(); // offset at the first frame past display_ms
      if (!answered) {
        await this.waitUntil(onset + trial.display_ms + this.config.graceMs,
                             () => answered !== null, (w) => (wake = w));
      }
    } finally {
      detach();
    }

    // read through a call so the closure assignment isn't narrowed away
    const a = ((): Answered | null => answered)();
    return a
      ? { item_id: trial.item_id, answer: a.answer, rt_ms: Math.round(a.at - onset) }
      : {
          item_id: trial.item_id,
          answer: "timeout",
          rt_ms: trial.display_ms + this.config.graceMs,
        };
  }

  private mapKey(key: string): "real" | "fake" | null {
    if (key === this.config.keymap.realKey) return "real";
    if (key === this.config.keymap.fakeKey) return "fake";
    return null;
  }

  private nextFrameTime(): Promise<number> {
    return new Promise((resolve) => this.clock.requestFrame(resolve));
  }

  private waitMs(ms: number): Promise<void> {
    if (ms <= 0) return Promise.resolve();
    return this.waitUntil(this.clock.now() + ms, () => false);
  }

  /**
   * Resolve at the first frame whose timestamp reaches the deadline, at
   * the frame where stop() reports true, or immediately when the waker
   * fires (a keypress between frames).
   */
  private waitUntil(
    deadline: number,
    stop: () => boolean,
    registerWake?: (wake: () => void) => void,
  ): Promise<void> {
    return new Promise((resolve) => {
      let frameId = 0;
      let settled = false;
      const finish = () => {
        if (settled) return;
        settled = true;
        this.clock.cancelFrame(frameId);
        resolve();
      };
      registerWake?.(finish);
      const step = (t: number) => {
        if (settled) return;
        if (stop() || t >= deadline) {
          finish();
          return;
        }
        frameId = this.clock.requestFrame(step);
      };
      frameId = this.clock.requestFrame(step);
    });
  }
}
