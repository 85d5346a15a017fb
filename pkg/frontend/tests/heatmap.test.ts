import { describe, expect, it } from "vitest";

import { paint, renderDensity, renderDiffusion } from "../src/heatmap.js";
import { matricesFixture, NUM_STEPS } from "./mock.js";

describe("density heatmap", () => {
  const payload = matricesFixture(0);

  it("cell values equal the API density matrix exactly", () => {
    const model = renderDensity(payload);
    for (let r = 0; r < payload.m; r++) {
      for (let c = 0; c < payload.m; c++) {
        expect(model.cellAt(r, c).value).toBe(payload.density[r][c]);
      }
    }
  });

  it("hover reports the exact node count", () => {
    const model = renderDensity(payload);
    const occupied = model.cells.find((c) => c.value > 0)!;
    expect(occupied.hover).toBe(`${occupied.value} node${occupied.value === 1 ? "" : "s"}`);
  });

  it("empty cells render fully transparent", () => {
    const model = renderDensity(payload);
    for (const cell of model.cells.filter((c) => c.value === 0)) {
      expect(cell.color).toBe("rgba(0,0,0,0)");
    }
  });
});

describe("diffusion heatmap", () => {
  it("cell values equal the API diffusion matrix at every step and mode", () => {
    for (let step = 0; step < NUM_STEPS; step++) {
      for (const mode of ["cumulative-active", "newly-active"]) {
        const payload = matricesFixture(step, mode);
        const model = renderDiffusion(payload);
        for (let r = 0; r < payload.m; r++) {
          for (let c = 0; c < payload.m; c++) {
            expect(model.cellAt(r, c).value).toBe(payload.diffusion[r][c]);
          }
        }
      }
    }
  });

  it("hover carries the API influence rate and class verbatim", () => {
    const payload = matricesFixture(1);
    const model = renderDiffusion(payload);
    for (let r = 0; r < payload.m; r++) {
      for (let c = 0; c < payload.m; c++) {
        const rate = payload.influence_rate[r][c];
        const hover = model.cellAt(r, c).hover;
        if (rate === null) {
          expect(hover).toBe("empty cell");
        } else {
          expect(hover).toContain(`rate ${rate.toFixed(2)}`);
          expect(hover).toContain(String(payload.rate_class[r][c]));
        }
      }
    }
  });

  it("rate filter dims exactly the cells outside the class", () => {
    const payload = matricesFixture(1);
    const model = renderDiffusion(payload, "high");
    for (const cell of model.cells) {
      const cls = payload.rate_class[cell.row][cell.col];
      expect(cell.filteredOut).toBe(cls !== "high");
    }
  });

  it("seeds-present filter keeps only cells with seeds", () => {
    const step0 = matricesFixture(0);
    const payload = matricesFixture(1);
    const model = renderDiffusion(payload, "seeds-present", step0.diffusion);
    for (const cell of model.cells) {
      expect(cell.filteredOut).toBe(step0.diffusion[cell.row][cell.col] === 0);
    }
  });
});

describe("paint", () => {
  it("issues one fill per cell at the right geometry", () => {
    const payload = matricesFixture(0);
    const model = renderDensity(payload);
    const rects: number[][] = [];
    const ctx = {
      fillStyle: "" as string,
      globalAlpha: 1,
      fillRect: (...args: number[]) => rects.push(args),
    };
    paint(model, ctx, 300);
    expect(rects.length).toBe(payload.m * payload.m);
    expect(rects[0]).toEqual([0, 0, 100, 100]);
    expect(rects[rects.length - 1]).toEqual([200, 200, 100, 100]);
  });
});
