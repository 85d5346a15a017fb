import type { ViewState } from "./state.js";

/**
 * Stepping playback over the shared view state. One animator drives
 * the step of every selected run, so side-by-side panels stay
 * step-synchronized by construction.
 */
export class Animator {
  private accumulatedMs = 0;

  constructor(private state: ViewState) {}

  play(): void {
    this.state.animation.playing = true;
  }

  pause(): void {
    this.state.animation.playing = false;
    this.accumulatedMs = 0;
  }

  rewind(): void {
    this.pause();
    this.state.setStep(0);
  }

  fastForward(): void {
    this.pause();
    this.state.setStep(this.state.maxStep);
  }

  setSpeed(stepsPerSecond: number): void {
    if (!(stepsPerSecond > 0)) throw new Error("speed must be positive");
    this.state.animation.speed = stepsPerSecond;
  }

  /** Advance by elapsed wall time; call from rAF or a test clock. */
  tick(elapsedMs: number): void {
    if (!this.state.animation.playing) return;
    this.accumulatedMs += elapsedMs;
    const msPerStep = 1000 / this.state.animation.speed;
    while (this.accumulatedMs >= msPerStep) {
      this.accumulatedMs -= msPerStep;
      if (this.state.step >= this.state.maxStep) {
        this.pause(); // hold on the final step
        return;
      }
      this.state.setStep(this.state.step + 1);
    }
  }
}
