export { ApiClient, ApiError, type FetchLike } from "./api.js";
export { Animator } from "./animate.js";
export { Dashboard, type RunPanel } from "./dashboard.js";
export {
  buildDetailPanel,
  MAX_DETAIL_VERTICES,
  ROLE_COLORS,
  type DetailEdge,
  type DetailNode,
  type DetailPanelModel,
} from "./detail.js";
export { SeedEditor } from "./editor.js";
export {
  paint,
  renderDensity,
  renderDiffusion,
  type CellPaint,
  type HeatmapModel,
} from "./heatmap.js";
export {
  MAX_SIDE_BY_SIDE,
  ViewState,
  type AnimationState,
  type BrushRect,
  type EdgeVisibility,
  type RateFilter,
} from "./state.js";
export { buildTrendCharts, type TrendChartModel, type TrendPoint } from "./trend.js";
export type * from "./types.js";
