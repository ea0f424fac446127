/** Frame scheduling behind an interface so tests can drive time by hand. */

export interface FrameClock {
  /** Monotonic milliseconds. */
  now(): number;
  /** Schedule cb for the next frame; cb receives the frame timestamp. */
  requestFrame(cb: (t: number) => void): number;
  cancelFrame(id: number): void;
}

export const browserClock: FrameClock = {
  now: () => performance.now(),
  requestFrame: (cb) => requestAnimationFrame(cb),
  cancelFrame: (id) => cancelAnimationFrame(id),
};

/**
 * A hand-cranked 60 Hz clock. advance(ms) moves time forward and fires
 * one frame callback batch per elapsed frame interval, like a browser
 * would. Callbacks registered during a frame run on the next one.
 */
export class VirtualClock implements FrameClock {
  static readonly FRAME_MS = 1000 / 60;

  private time = 0;
  private nextId = 1;
  private pending = new Map<number, (t: number) => void>();

  now(): number {
    return this.time;
  }

  requestFrame(cb: (t: number) => void): number {
    const id = this.nextId++;
    this.pending.set(id, cb);
    return id;
  }

  cancelFrame(id: number): void {
    this.pending.delete(id);
  }

  /** Fire one frame at the current time. */
  tick(): void {
    const batch = [...this.pending.values()];
    this.pending.clear();
    for (const cb of batch) cb(this.time);
  }

  /** Advance time, emitting a frame every FRAME_MS. */
  advance(ms: number): void {
    const target = this.time + ms;
    while (this.time + VirtualClock.FRAME_MS <= target) {
      this.time += VirtualClock.FRAME_MS;
      this.tick();
    }
    this.time = target;
  }

  /** True while some frame callback is waiting. */
  hasPending(): boolean {
    return this.pending.size > 0;
  }
}
