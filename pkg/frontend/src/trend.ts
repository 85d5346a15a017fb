import type { TrendPayload } from "./types.js";

export interface TrendPoint {
  step: number;
  value: number;
  /** true when the value is held from a shorter run's final step */
  padded: boolean;
}

export interface TrendChartModel {
  runId: string;
  cumulative: TrendPoint[];
  newActive: TrendPoint[];
  /** x position of the red current-step marker */
  markerStep: number;
}

/**
 * Side-by-side trend chart model. Runs with fewer steps are padded by
 * holding their final cumulative value (flagged so the view can note
 * it visually); newly-active pads with zero.
 */
export function buildTrendCharts(
  trends: { runId: string; trend: TrendPayload }[],
  currentStep: number,
): TrendChartModel[] {
  const maxLen = Math.max(0, ...trends.map((t) => t.trend.cumulative_active_mean.length));
  return trends.map(({ runId, trend }) => {
    const cum = trend.cumulative_active_mean;
    const nw = trend.new_active_mean;
    const cumulative: TrendPoint[] = [];
    const newActive: TrendPoint[] = [];
    for (let step = 0; step < maxLen; step++) {
      const padded = step >= cum.length;
      cumulative.push({ step, value: padded ? cum[cum.length - 1] : cum[step], padded });
      newActive.push({ step, value: padded ? 0 : nw[step], padded });
    }
    return {
      runId,
      cumulative,
      newActive,
      markerStep: Math.min(currentStep, maxLen - 1),
    };
  });
}
