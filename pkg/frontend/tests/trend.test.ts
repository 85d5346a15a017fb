import { describe, expect, it } from "vitest";

import { buildTrendCharts } from "../src/trend.js";
import { matricesFixture } from "./mock.js";

describe("trend chart model", () => {
  const trend = matricesFixture(0).trend;

  it("points equal the API trend series exactly", () => {
    const [model] = buildTrendCharts([{ runId: "a", trend }], 1);
    expect(model.cumulative.map((p) => p.value)).toEqual(trend.cumulative_active_mean);
    expect(model.newActive.map((p) => p.value)).toEqual(trend.new_active_mean);
    expect(model.markerStep).toBe(1);
  });

  it("cumulative series from the service is monotone", () => {
    for (let i = 1; i < trend.cumulative_active_mean.length; i++) {
      expect(trend.cumulative_active_mean[i]).toBeGreaterThanOrEqual(
        trend.cumulative_active_mean[i - 1],
      );
    }
  });

  it("pads shorter runs by holding the final cumulative value", () => {
    const short = {
      new_active_mean: [2, 1],
      cumulative_active_mean: [2, 3],
      current_step: 0,
    };
    const models = buildTrendCharts(
      [
        { runId: "long", trend },
        { runId: "short", trend: short },
      ],
      0,
    );
    const padded = models[1];
    expect(padded.cumulative.length).toBe(trend.cumulative_active_mean.length);
    for (const p of padded.cumulative.slice(2)) {
      expect(p.value).toBe(3);
      expect(p.padded).toBe(true);
    }
    for (const p of padded.newActive.slice(2)) expect(p.value).toBe(0);
    expect(padded.cumulative[1].padded).toBe(false);
  });

  it("clamps the marker to the last step", () => {
    const [model] = buildTrendCharts([{ runId: "a", trend }], 99);
    expect(model.markerStep).toBe(trend.cumulative_active_mean.length - 1);
  });
});
