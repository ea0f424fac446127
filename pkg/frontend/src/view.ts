/** What the trial runner needs from a screen, plus the DOM implementation. */

import type { ScoreReport } from "./api.js";
import type { Localizer } from "./localize.js";

export interface TrialView {
  showFixation(): void;
  showStimulus(text: string): void;
  hideStimulus(): void;
  /** Self-paced pause between batches; resolves when the participant continues. */
  showBreak(finishedBatch: number, totalBatches: number): Promise<void>;
  showCompletion(report: ScoreReport): void;
  showError(message: string): void;
  setProgress(done: number, total: number): void;
  /** Attach a keydown handler; returns the detach function. */
  onKey(handler: (key: string) => void): () => void;
}

const BLOCKED_EVENTS = ["copy", "cut", "contextmenu", "selectstart", "dragstart"] as const;

export class DomView implements TrialView {
  private stimulus: HTMLDivElement;
  private message: HTMLDivElement;
  private progress: HTMLDivElement;
  private button: HTMLButtonElement;
  private doc: Document;

  constructor(root: HTMLElement, private t: Localizer) {
    this.doc = root.ownerDocument;
    root.innerHTML = "";
    this.progress = this.doc.createElement("div");
    this.progress.className = "progress";
    this.stimulus = this.doc.createElement("div");
    this.stimulus.className = "stimulus";
    this.message = this.doc.createElement("div");
    this.message.className = "message";
    this.button = this.doc.createElement("button");
    this.button.className = "continue";
    this.button.hidden = true;
    root.append(this.progress, this.stimulus, this.message, this.button);

    // participants must not be able to copy the word and look it up
    this.stimulus.style.userSelect = "none";
    this.stimulus.style.webkitUserSelect = "none";
    for (const name of BLOCKED_EVENTS) {
      this.stimulus.addEventListener(name, (e) => e.preventDefault());
    }
  }

  stimulusElement(): HTMLElement {
    return this.stimulus;
  }

  showFixation(): void {
    this.message.textContent = "";
    this.stimulus.textContent = "+";
    this.stimulus.classList.add("fixation");
  }

  showStimulus(text: string): void {
    this.stimulus.classList.remove("fixation");
    this.stimulus.textContent = text;
  }

  hideStimulus(): void {
    this.stimulus.textContent = "";
  }

  showBreak(finishedBatch: number, totalBatches: number): Promise<void> {
    this.hideStimulus();
    this.message.textContent = this.t
      .t("break_message")
      .replace("{done}", String(finishedBatch))
      .replace("{total}", String(totalBatches));
    this.button.textContent = this.t.t("continue");
    this.button.hidden = false;
    return new Promise((resolve) => {
      this.button.addEventListener(
        "click",
        () => {
          this.button.hidden = true;
          this.message.textContent = "";
          resolve();
        },
        { once: true },
      );
    });
  }

  showCompletion(report: ScoreReport): void {
    this.hideStimulus();
    this.progress.textContent = "";
    const pct = (x: number) => `${(100 * x).toFixed(1)}%`;
    this.message.textContent =
      this.t.t("done_message").replace("{accuracy}", pct(report.accuracy)) +
      " " +
      this.t
        .t("done_batches")
        .replace("{batches}", report.batch_accuracies.map(pct).join(", "));
  }

  showError(message: string): void {
    this.hideStimulus();
    this.message.textContent = `${this.t.t("error_prefix")} ${message}`;
  }

  setProgress(done: number, total: number): void {
    this.progress.textContent = this.t
      .t("progress")
      .replace("{done}", String(done))
      .replace("{total}", String(total));
  }

  onKey(handler: (key: string) => void): () => void {
    const listener = (e: Event) => handler((e as KeyboardEvent).key);
    this.doc.addEventListener("keydown", listener);
    return () => this.doc.removeEventListener("keydown", listener);
  }
}
