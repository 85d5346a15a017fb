import { scaleSequential } from "d3-scale";
import { interpolateBlues, interpolateYlOrRd } from "d3-scale-chromatic";

import type { RateFilter } from "./state.js";
import type { MatricesPayload } from "./types.js";

/** One cell of a rendered heatmap; values come verbatim from the API. */
export interface CellPaint {
  row: number;
  col: number;
  value: number;
  color: string;
  /** text shown on hover */
  hover: string;
  /** dimmed when a rate filter excludes the cell */
  filteredOut: boolean;
}

export interface HeatmapModel {
  m: number;
  cells: CellPaint[];
  cellAt(row: number, col: number): CellPaint;
}

interface CanvasLike {
  fillStyle: string | CanvasGradient | CanvasPattern;
  globalAlpha: number;
  fillRect(x: number, y: number, w: number, h: number): void;
}

function makeModel(m: number, cells: CellPaint[]): HeatmapModel {
  return {
    m,
    cells,
    cellAt(row, col) {
      const cell = cells[row * m + col];
      if (!cell) throw new Error(`cell (${row},${col}) out of range`);
      return cell;
    },
  };
}

function passesFilter(
  payload: MatricesPayload,
  row: number,
  col: number,
  filter: RateFilter,
  seedMatrix?: number[][],
): boolean {
  if (filter === "none") return true;
  if (filter === "seeds-present") {
    // step-0 cumulative diffusion equals the per-cell seed count
    return (seedMatrix?.[row]?.[col] ?? 0) > 0;
  }
  return payload.rate_class[row][col] === filter;
}

/** Grey-blue density heatmap; hover reports the exact node count. */
export function renderDensity(
  payload: MatricesPayload,
  filter: RateFilter = "none",
  seedMatrix?: number[][],
): HeatmapModel {
  const max = Math.max(1, ...payload.density.flat());
  const scale = scaleSequential(interpolateBlues).domain([0, max]);
  const cells: CellPaint[] = [];
  for (let row = 0; row < payload.m; row++) {
    for (let col = 0; col < payload.m; col++) {
      const count = payload.density[row][col];
      cells.push({
        row,
        col,
        value: count,
        color: count === 0 ? "rgba(0,0,0,0)" : scale(count),
        hover: `${count} node${count === 1 ? "" : "s"}`,
        filteredOut: !passesFilter(payload, row, col, filter, seedMatrix),
      });
    }
  }
  return makeModel(payload.m, cells);
}

/**
 * Diffusion heatmap in the YlOrRd scale. Cell values are the API's
 * expected active counts; only the color mapping happens client-side.
 */
export function renderDiffusion(
  payload: MatricesPayload,
  filter: RateFilter = "none",
  seedMatrix?: number[][],
): HeatmapModel {
  const scale = scaleSequential(interpolateYlOrRd).domain([
    0,
    Math.max(1e-9, ...payload.density.flat()),
  ]);
  const cells: CellPaint[] = [];
  for (let row = 0; row < payload.m; row++) {
    for (let col = 0; col < payload.m; col++) {
      const value = payload.diffusion[row][col];
      const rate = payload.influence_rate[row][col];
      const cls = payload.rate_class[row][col];
      const hover =
        rate === null
          ? "empty cell"
          : `${value.toFixed(3)} expected active (rate ${rate.toFixed(2)}, ${cls})`;
      cells.push({
        row,
        col,
        value,
        color: value === 0 ? "rgba(0,0,0,0)" : scale(value),
        hover,
        filteredOut: !passesFilter(payload, row, col, filter, seedMatrix),
      });
    }
  }
  return makeModel(payload.m, cells);
}

/** Blit a heatmap model onto a canvas context. */
export function paint(model: HeatmapModel, ctx: CanvasLike, sizePx: number): void {
  const cell = sizePx / model.m;
  for (const c of model.cells) {
    ctx.globalAlpha = c.filteredOut ? 0.15 : 1.0;
    ctx.fillStyle = c.color;
    ctx.fillRect(c.col * cell, c.row * cell, cell, cell);
  }
  ctx.globalAlpha = 1.0;
}
