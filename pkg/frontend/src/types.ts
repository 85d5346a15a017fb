/** Response shapes of the imlab service API, mirrored 1:1. */

export type RateClass = "low" | "medium" | "high";

export interface RunRecord {
  run_id: string;
  graph_ref: string;
  seeds: { ids: number[]; k: number; origin: string };
  model: { kind: string; [key: string]: unknown };
  r: number;
  master_seed: number;
  m: number;
  layout_iterations: number;
  layout_seed: number;
  parent_run_id: string | null;
  schema: string;
  status: string;
}

export interface TrendPayload {
  new_active_mean: number[];
  cumulative_active_mean: number[];
  current_step: number;
}

export interface MatricesPayload {
  run_id: string;
  m: number;
  step: number;
  num_steps: number;
  mode: "cumulative-active" | "newly-active";
  density: number[][];
  diffusion: number[][];
  influence_rate: (number | null)[][];
  rate_class: (RateClass | null)[][];
  trend: TrendPayload;
  spread_mean: number;
  spread_std: number;
}

export interface DetailPayload {
  run_id: string;
  step: number;
  vertices: number[];
  internal_arcs: [number, number][];
  boundary_arcs: [number, number][];
  roles: Record<string, "seed" | "active" | "inactive">;
  positions: Record<string, [number, number]>;
}

export interface Candidate {
  vertex: number;
  degree: number;
  cell: [number, number];
}

export interface SuggestionPayload {
  n: number;
  truncated: boolean;
  removals: Candidate[];
  promotions: Candidate[];
  rationale: Record<string, number>;
}

export interface CompareReport {
  run_a: string;
  run_b: string;
  spread_mean_a: number;
  spread_mean_b: number;
  spread_std_a: number;
  spread_std_b: number;
  spread_delta: number;
  relative_spread_delta: number;
  spread_delta_se: number;
  trend_cumulative_delta: number[];
  trend_new_delta: number[];
  cell_rate_delta: number[][];
}

export interface ProgressEvent {
  completed: number;
  total: number;
  partial_spread_mean: number;
}
