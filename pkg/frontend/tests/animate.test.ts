import { describe, expect, it } from "vitest";

import { Animator } from "../src/animate.js";
import { ViewState } from "../src/state.js";
import { matricesFixture, NUM_STEPS } from "./mock.js";

function setup(numSteps = NUM_STEPS) {
  const state = new ViewState();
  state.setNumSteps(numSteps);
  return { state, animator: new Animator(state) };
}

describe("Animator", () => {
  it("pause freezes the current step", () => {
    const { state, animator } = setup();
    animator.play();
    animator.tick(600); // 2 steps/s -> one step
    expect(state.step).toBe(1);
    animator.pause();
    animator.tick(5000);
    expect(state.step).toBe(1);
  });

  it("rewind returns to step 0 (seeds only)", () => {
    const { state, animator } = setup();
    state.setStep(2);
    animator.rewind();
    expect(state.step).toBe(0);
    expect(state.animation.playing).toBe(false);
  });

  it("fast-forward jumps to the final step", () => {
    const { state, animator } = setup();
    animator.fastForward();
    expect(state.step).toBe(NUM_STEPS - 1);
  });

  it("playback visits every step once and holds at the end", () => {
    const { state, animator } = setup();
    const visited = [state.step];
    state.onChange(() => visited.push(state.step));
    animator.play();
    for (let i = 0; i < 20; i++) animator.tick(500);
    expect(visited).toEqual([...Array(NUM_STEPS).keys()]);
    expect(state.animation.playing).toBe(false);
  });

  it("stepping 0..final replays exactly the per-step newly-active counts", () => {
    const { state, animator } = setup();
    const newlySeen: number[] = [];
    const record = () =>
      newlySeen.push(matricesFixture(state.step, "newly-active").diffusion.flat().reduce((a, b) => a + b, 0));
    record();
    state.onChange(record);
    animator.play();
    for (let i = 0; i < 20; i++) animator.tick(500);
    const expected = matricesFixture(0).trend.new_active_mean;
    expect(newlySeen.length).toBe(expected.length);
    newlySeen.forEach((v, i) => expect(v).toBeCloseTo(expected[i], 9));
  });

  it("speed changes rescale the step cadence", () => {
    const { state, animator } = setup(10);
    animator.setSpeed(10);
    animator.play();
    animator.tick(350); // 3 full steps at 10/s
    expect(state.step).toBe(3);
    expect(() => animator.setSpeed(0)).toThrow();
  });
});
