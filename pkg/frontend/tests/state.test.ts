import { describe, expect, it } from "vitest";

import { MAX_SIDE_BY_SIDE, ViewState } from "../src/state.js";

describe("ViewState", () => {
  it("clamps step into the run range", () => {
    const s = new ViewState();
    s.setNumSteps(4);
    s.setStep(99);
    expect(s.step).toBe(3);
    s.setStep(-5);
    expect(s.step).toBe(0);
  });

  it("shrinking the step range pulls the current step back in", () => {
    const s = new ViewState();
    s.setNumSteps(10);
    s.setStep(9);
    s.setNumSteps(3);
    expect(s.step).toBe(2);
  });

  it("allows at most three side-by-side runs", () => {
    const s = new ViewState();
    for (let i = 0; i < MAX_SIDE_BY_SIDE; i++) s.selectRun(`r${i}`);
    expect(() => s.selectRun("r3")).toThrow(/at most 3/);
    s.selectRun("r0"); // re-selecting an existing run is a no-op
    expect(s.runs.length).toBe(3);
  });

  it("normalizes the brush rectangle to be contiguous", () => {
    const s = new ViewState();
    s.setBrush([5, 7, 2, 1]);
    expect(s.brush).toEqual([2, 1, 5, 7]);
  });

  it("changing m drops the brush (cell coords become stale)", () => {
    const s = new ViewState();
    s.setBrush([0, 0, 1, 1]);
    s.setM(20);
    expect(s.brush).toBeNull();
    expect(s.m).toBe(20);
  });

  it("rejects a non-positive or fractional m", () => {
    const s = new ViewState();
    expect(() => s.setM(0)).toThrow();
    expect(() => s.setM(2.5)).toThrow();
  });

  it("notifies listeners once per mutation", () => {
    const s = new ViewState();
    let calls = 0;
    s.onChange(() => calls++);
    s.setNumSteps(5);
    s.setStep(2);
    s.setStep(2); // unchanged -> no notification
    s.setRateFilter("high");
    expect(calls).toBe(2);
  });
});
