import type { EdgeVisibility } from "./state.js";
import type { DetailPayload } from "./types.js";

export const MAX_DETAIL_VERTICES = 5000;

export const ROLE_COLORS = {
  seed: "#1f77b4", // blue
  active: "#8b0000", // dark red
  inactive: "#b0b0b0",
} as const;

export interface DetailNode {
  id: number;
  x: number;
  y: number;
  role: keyof typeof ROLE_COLORS;
  color: string;
}

export interface DetailEdge {
  source: number;
  target: number;
  /** influence exiting/entering the brushed cells renders in red */
  boundary: boolean;
  active: boolean;
}

export interface DetailPanelModel {
  nodes: DetailNode[];
  edges: DetailEdge[];
  /** set when the selection exceeds the render cap */
  tooLarge: boolean;
  notice: string | null;
}

/**
 * Node-link model for a brushed cell region. An arc counts as active
 * when both endpoints are activated in the traced cascade at the
 * current step; the roles themselves come from the API untouched.
 */
export function buildDetailPanel(
  payload: DetailPayload,
  edgeVisibility: EdgeVisibility,
): DetailPanelModel {
  if (payload.vertices.length > MAX_DETAIL_VERTICES) {
    return {
      nodes: [],
      edges: [],
      tooLarge: true,
      notice: `selection too large (${payload.vertices.length} vertices, cap ${MAX_DETAIL_VERTICES})`,
    };
  }
  const nodes: DetailNode[] = payload.vertices.map((id) => {
    const role = payload.roles[String(id)];
    const [x, y] = payload.positions[String(id)];
    return { id, x, y, role, color: ROLE_COLORS[role] };
  });
  const isOn = (v: number) => {
    const role = payload.roles[String(v)];
    return role !== undefined && role !== "inactive";
  };
  const edges: DetailEdge[] = [];
  if (edgeVisibility !== "hidden") {
    const collect = (arcs: [number, number][], boundary: boolean) => {
      for (const [u, vtx] of arcs) {
        // boundary arcs have one endpoint outside the brush, with no
        // role reported; judge them by the endpoint we can see
        const active = boundary ? isOn(u) || isOn(vtx) : isOn(u) && isOn(vtx);
        if (edgeVisibility === "active-only" && !active) continue;
        edges.push({ source: u, target: vtx, boundary, active });
      }
    };
    collect(payload.internal_arcs, false);
    collect(payload.boundary_arcs, true);
  }
  return { nodes, edges, tooLarge: false, notice: null };
}
