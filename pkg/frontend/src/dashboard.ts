import type { ApiClient } from "./api.js";
import { Animator } from "./animate.js";
import { buildDetailPanel, type DetailPanelModel } from "./detail.js";
import { SeedEditor } from "./editor.js";
import { renderDensity, renderDiffusion, type HeatmapModel } from "./heatmap.js";
import { ViewState } from "./state.js";
import { buildTrendCharts, type TrendChartModel } from "./trend.js";
import type { CompareReport, MatricesPayload } from "./types.js";

/** Everything one run contributes to the coordinated views. */
export interface RunPanel {
  runId: string;
  payload: MatricesPayload;
  density: HeatmapModel;
  diffusion: HeatmapModel;
  detail: DetailPanelModel | null;
}

/**
 * Orchestrates the coordinated views: one shared ViewState, up to
 * three run panels, a synchronized trend chart, and the seed-editor
 * flow. All numbers shown come from API payloads; this class only
 * decides what to fetch and when.
 */
export class Dashboard {
  readonly state = new ViewState();
  readonly animator = new Animator(this.state);
  panels: RunPanel[] = [];
  trends: TrendChartModel[] = [];
  comparison: CompareReport | null = null;

  constructor(private api: ApiClient) {}

  async addRun(runId: string): Promise<void> {
    this.state.selectRun(runId);
    await this.refresh();
  }

  removeRun(runId: string): void {
    this.state.deselectRun(runId);
    this.panels = this.panels.filter((p) => p.runId !== runId);
  }

  async setStep(step: number): Promise<void> {
    this.state.setStep(step);
    await this.refresh();
  }

  async setM(m: number | null): Promise<void> {
    this.state.setM(m);
    await this.refresh();
  }

  async setBrush(rect: [number, number, number, number] | null): Promise<void> {
    this.state.setBrush(rect);
    await this.refresh();
  }

  /** One interaction cycle: re-fetch and rebuild every view. */
  async refresh(): Promise<void> {
    const { step, m, brush, rateFilter, edgeVisibility } = {
      step: this.state.step,
      m: this.state.m ?? undefined,
      brush: this.state.brush,
      rateFilter: this.state.rateFilter,
      edgeVisibility: this.state.edgeVisibility,
    };
    const panels: RunPanel[] = [];
    for (const runId of this.state.runs) {
      // shorter runs clamp to their own final step
      const probe = await this.api.matrices(runId, 0, { m });
      const runStep = Math.min(step, probe.num_steps - 1);
      const payload =
        runStep === 0 ? probe : await this.api.matrices(runId, runStep, { m });
      const seedMatrix = probe.diffusion; // step-0 expected active == seed counts
      const detail = brush
        ? buildDetailPanel(await this.api.detail(runId, brush, runStep, m), edgeVisibility)
        : null;
      panels.push({
        runId,
        payload,
        density: renderDensity(payload, rateFilter, seedMatrix),
        diffusion: renderDiffusion(payload, rateFilter, seedMatrix),
        detail,
      });
    }
    this.panels = panels;
    this.state.setNumSteps(Math.max(1, ...panels.map((p) => p.payload.num_steps)));
    this.trends = buildTrendCharts(
      panels.map((p) => ({ runId: p.runId, trend: p.payload.trend })),
      this.state.step,
    );
  }

  async openEditor(runId: string, n = 20): Promise<SeedEditor> {
    const suggestion = await this.api.suggestion(runId, n);
    return new SeedEditor(this.api, runId, suggestion);
  }

  /** Submit an editor, add the child beside its parent, and compare. */
  async submitEditor(editor: SeedEditor, parentRunId: string): Promise<string> {
    const childId = await editor.submit();
    if (!this.state.runs.includes(childId)) {
      await this.addRun(childId);
    }
    this.comparison = await this.api.compare(parentRunId, childId);
    return childId;
  }
}
