export type RateFilter = "none" | "low" | "medium" | "high" | "seeds-present";
export type EdgeVisibility = "all" | "active-only" | "hidden";

export interface AnimationState {
  playing: boolean;
  /** steps per second while playing */
  speed: number;
}

/** Inclusive cell rectangle [row0, col0, row1, col1], normalized. */
export type BrushRect = [number, number, number, number];

export const MAX_SIDE_BY_SIDE = 3;

/**
 * Shared interaction state for all coordinated views. One instance
 * drives every selected run: step, m, and brush are mirrored so the
 * side-by-side panels always describe the same slice.
 */
export class ViewState {
  private runIds: string[] = [];
  private stepValue = 0;
  private numSteps = 1;
  private mValue: number | null = null;
  rateFilter: RateFilter = "none";
  private brushRect: BrushRect | null = null;
  animation: AnimationState = { playing: false, speed: 2 };
  edgeVisibility: EdgeVisibility = "all";

  private listeners: (() => void)[] = [];

  onChange(fn: () => void): void {
    this.listeners.push(fn);
  }

  private notify(): void {
    for (const fn of this.listeners) fn();
  }

  get runs(): readonly string[] {
    return this.runIds;
  }

  selectRun(runId: string): void {
    if (this.runIds.includes(runId)) return;
    if (this.runIds.length >= MAX_SIDE_BY_SIDE) {
      throw new Error(`at most ${MAX_SIDE_BY_SIDE} runs side by side`);
    }
    this.runIds.push(runId);
    this.notify();
  }

  deselectRun(runId: string): void {
    this.runIds = this.runIds.filter((r) => r !== runId);
    this.notify();
  }

  get step(): number {
    return this.stepValue;
  }

  /** Longest step count over the selected runs; shorter runs pad. */
  setNumSteps(n: number): void {
    this.numSteps = Math.max(1, n);
    this.stepValue = Math.min(this.stepValue, this.numSteps - 1);
  }

  get maxStep(): number {
    return this.numSteps - 1;
  }

  setStep(step: number): void {
    const clamped = Math.max(0, Math.min(step, this.numSteps - 1));
    if (clamped !== this.stepValue) {
      this.stepValue = clamped;
      this.notify();
    }
  }

  get m(): number | null {
    return this.mValue;
  }

  setM(m: number | null): void {
    if (m !== null && (!Number.isInteger(m) || m < 1)) {
      throw new Error(`invalid matrix resolution ${m}`);
    }
    this.mValue = m;
    this.brushRect = null; // cell coordinates are no longer meaningful
    this.notify();
  }

  get brush(): BrushRect | null {
    return this.brushRect;
  }

  /** Normalizes corners so the stored rectangle is always contiguous. */
  setBrush(rect: BrushRect | null): void {
    if (rect === null) {
      this.brushRect = null;
    } else {
      const [r0, c0, r1, c1] = rect;
      this.brushRect = [
        Math.min(r0, r1),
        Math.min(c0, c1),
        Math.max(r0, r1),
        Math.max(c0, c1),
      ];
    }
    this.notify();
  }

  setRateFilter(filter: RateFilter): void {
    this.rateFilter = filter;
    this.notify();
  }

  setEdgeVisibility(v: EdgeVisibility): void {
    this.edgeVisibility = v;
    this.notify();
  }
}
