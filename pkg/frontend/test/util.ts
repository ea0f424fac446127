/** Shared test doubles: a recording view with scripted keys and a pump
 *  that runs a promise to completion on the virtual clock. */

import type { ScoreReport } from "../src/api.js";
import { VirtualClock } from "../src/clock.js";
import type { TrialView } from "../src/view.js";

export interface ViewEvent {
  kind: "fixation" | "show" | "hide" | "break" | "completion" | "error";
  at: number;
  detail?: string;
}

/** What to do when a stimulus appears. */
export type KeyPlan = { afterMs: number; key: string } | "none";

export class FakeView implements TrialView {
  events: ViewEvent[] = [];
  breaks: Array<[number, number]> = [];
  report: ScoreReport | null = null;
  private handlers = new Set<(key: string) => void>();
  private shown = 0;

  constructor(
    private clock: VirtualClock,
    private planner: (text: string, index: number) => KeyPlan = () => "none",
  ) {}

  private log(kind: ViewEvent["kind"], detail?: string) {
    this.events.push({ kind, at: this.clock.now(), detail });
  }

  showFixation(): void {
    this.log("fixation");
  }

  showStimulus(text: string): void {
    this.log("show", text);
    const plan = this.planner(text, this.shown++);
    if (plan !== "none") {
      const fireAt = this.clock.now() + plan.afterMs;
      const step = (t: number) => {
        if (t >= fireAt) this.pressKey(plan.key);
        else this.clock.requestFrame(step);
      };
      this.clock.requestFrame(step);
    }
  }

  hideStimulus(): void {
    this.log("hide");
  }

  showBreak(finishedBatch: number, totalBatches: number): Promise<void> {
    this.log("break");
    this.breaks.push([finishedBatch, totalBatches]);
    return Promise.resolve(); // self-paced break, resumed at once
  }

  showCompletion(report: ScoreReport): void {
    this.log("completion");
    this.report = report;
  }

  showError(message: string): void {
    this.log("error", message);
  }

  setProgress(): void {}

  onKey(handler: (key: string) => void): () => void {
    this.handlers.add(handler);
    return () => this.handlers.delete(handler);
  }

  pressKey(key: string): void {
    for (const h of [...this.handlers]) h(key);
  }

  times(kind: ViewEvent["kind"]): number[] {
    return this.events.filter((e) => e.kind === kind).map((e) => e.at);
  }
}

const flush = () => new Promise<void>((r) => setTimeout(r, 0));

/**
 * Advance the virtual clock one frame at a time, flushing the event loop
 * between frames, until the promise settles.
 */
export async function settle<T>(
  clock: VirtualClock,
  promise: Promise<T>,
  maxVirtualMs = 1_200_000,
): Promise<T> {
  let state: { done: false } | { done: true; value: T } | { done: true; err: unknown } = {
    done: false,
  };
  promise.then(
    (value) => (state = { done: true, value }),
    (err) => (state = { done: true, err }),
  );
  let elapsed = 0;
  await flush();
  while (!state.done && elapsed < maxVirtualMs) {
    clock.advance(VirtualClock.FRAME_MS);
    elapsed += VirtualClock.FRAME_MS;
    await flush();
  }
  if (!state.done) throw new Error("virtual time budget exhausted");
  if ("err" in state) throw state.err;
  return state.value;
}

export const FRAME = VirtualClock.FRAME_MS;
