"""Grid partition of a layout and the matrix views derived from it.

The layout bounding box is sliced into m x m uniform cells. The density
matrix counts resident vertices per cell; diffusion matrices hold the
expected number of active vertices per cell at a step (mean over runs).
A DiffusionMatrix can only be built from the Grid it references, so the
two views always share the same cells.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffusion import AggregatedDiffusion, DiffusionRun
from .graphs import Graph
from .layout import Layout

MAX_CELLS_PER_SIDE = 256

RATE_LOW_BELOW = 0.30
RATE_HIGH_ABOVE = 0.60


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    m: int
    bbox: tuple[float, float, float, float]
    cell_of: np.ndarray  # [n, 2] (row, col) per vertex
    members: tuple[tuple[int, ...], ...]  # row-major m*m, ids sorted

    def members_of(self, row: int, col: int) -> tuple[int, ...]:
        return self.members[row * self.m + col]

    @property
    def n(self) -> int:
        return int(self.cell_of.shape[0])


@dataclass(frozen=True)
class DensityMatrix:
    grid: Grid
    counts: np.ndarray  # [m, m] int

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class DiffusionMatrix:
    grid: Grid
    step: int
    mode: str  # "cumulative-active" | "newly-active"
    values: np.ndarray  # [m, m] expected active vertices per cell


@dataclass(frozen=True)
class TrendSeries:
    new_active_mean: np.ndarray
    cumulative_active_mean: np.ndarray
    current_step: int = 0


def build_grid(layout: Layout, m: int) -> Grid:
    """Uniform m x m tiling of the layout bounding box.

    Points on an interior cell boundary belong to the higher-index cell;
    points at the maximum coordinate go to the last cell.
    """
    if not (1 <= m <= MAX_CELLS_PER_SIDE):
        raise GridError(f"m={m} out of range [1, {MAX_CELLS_PER_SIDE}]")
    min_x, min_y, max_x, max_y = layout.bbox()
    w = max(max_x - min_x, 1e-12)
    h = max(max_y - min_y, 1e-12)
    pos = layout.positions
    col = np.minimum((pos[:, 0] - min_x) / w * m, m - 1).astype(np.int64)
    row = np.minimum((pos[:, 1] - min_y) / h * m, m - 1).astype(np.int64)
    cell_of = np.stack([row, col], axis=1)
    members: list[tuple[int, ...]] = [() for _ in range(m * m)]
    flat = row * m + col
    order = np.argsort(flat, kind="stable")
    bounds = np.searchsorted(flat[order], np.arange(m * m + 1))
    for c in range(m * m):
        ids = order[bounds[c] : bounds[c + 1]]
        members[c] = tuple(int(v) for v in np.sort(ids))
    return Grid(m=m, bbox=(min_x, min_y, max_x, max_y), cell_of=cell_of, members=tuple(members))


def density_matrix(grid: Grid) -> DensityMatrix:
    counts = np.array([len(ms) for ms in grid.members], dtype=np.int64).reshape(grid.m, grid.m)
    return DensityMatrix(grid=grid, counts=counts)


def diffusion_matrix(
    grid: Grid, agg: AggregatedDiffusion, step: int, mode: str = "cumulative-active"
) -> DiffusionMatrix:
    """Expected active vertices per cell at `step`, mean over runs."""
    if not (0 <= step < agg.num_steps):
        raise GridError(f"step {step} out of range [0, {agg.num_steps})")
    if mode == "cumulative-active":
        per_vertex = agg.step_freq[: step + 1].sum(axis=0)
    elif mode == "newly-active":
        per_vertex = agg.step_freq[step]
    else:
        raise GridError(f"unknown mode {mode!r}")
    values = np.zeros((grid.m, grid.m))
    row, col = grid.cell_of[:, 0], grid.cell_of[:, 1]
    np.add.at(values, (row, col), per_vertex)
    return DiffusionMatrix(grid=grid, step=step, mode=mode, values=values)


def influence_rate(grid: Grid, dm: DiffusionMatrix, cell: tuple[int, int]) -> float:
    """Expected-active over resident count for one cell, in [0,1]."""
    row, col = cell
    density = len(grid.members_of(row, col))
    if density == 0:
        raise GridError(f"cell ({row},{col}) is empty; influence rate is undefined")
    return float(dm.values[row, col] / density)


def classify_rate(rate: float) -> str:
    """Band an influence rate: low < 0.30, medium in [0.30, 0.60], high > 0.60."""
    if rate < RATE_LOW_BELOW:
        return "low"
    if rate <= RATE_HIGH_ABOVE:
        return "medium"
    return "high"


@dataclass(frozen=True)
class DetailBundle:
    """Node-link detail of a rectangular cell selection."""

    vertices: tuple[int, ...]
    internal_arcs: tuple[tuple[int, int], ...]
    boundary_arcs: tuple[tuple[int, int], ...]  # exactly one endpoint inside
    roles: dict[int, str]  # seed | active | inactive, per inside vertex
    positions: dict[int, tuple[float, float]]


def subgraph_of_cells(
    grid: Grid,
    graph: Graph,
    layout: Layout,
    cells: tuple[int, int, int, int],
    run: DiffusionRun | None = None,
    step: int | None = None,
) -> DetailBundle:
    """Induced detail of a contiguous (row0, col0, row1, col1) selection.

    Boundary arcs (one endpoint inside) are reported separately so
    influence exiting the selection stays visible. Roles are computed
    against `run` at `step` when given.
    """
    r0, c0, r1, c1 = cells
    if not (0 <= r0 <= r1 < grid.m and 0 <= c0 <= c1 < grid.m):
        raise GridError(f"selection {cells} is not a rectangle inside the grid")
    inside_ids: list[int] = []
    for r in range(r0, r1 + 1):
        for c in range(c0, c1 + 1):
            inside_ids.extend(grid.members_of(r, c))
    vertices = tuple(sorted(inside_ids))
    inside = np.zeros(graph.n, dtype=bool)
    inside[list(vertices)] = True

    src_in = inside[graph.src]
    dst_in = inside[graph.dst]
    internal = np.flatnonzero(src_in & dst_in)
    boundary = np.flatnonzero(src_in ^ dst_in)
    internal_arcs = tuple((int(graph.src[a]), int(graph.dst[a])) for a in internal)
    boundary_arcs = tuple((int(graph.src[a]), int(graph.dst[a])) for a in boundary)

    roles: dict[int, str] = {}
    if run is not None:
        at = run.active_at(step if step is not None else len(run.steps) - 1)
        seeds = set(run.steps[0].newly_active)
        for v in vertices:
            roles[v] = "seed" if v in seeds else ("active" if v in at else "inactive")
    else:
        roles = {v: "inactive" for v in vertices}
    positions = {v: (float(layout.positions[v, 0]), float(layout.positions[v, 1])) for v in vertices}
    return DetailBundle(
        vertices=vertices,
        internal_arcs=internal_arcs,
        boundary_arcs=boundary_arcs,
        roles=roles,
        positions=positions,
    )


def trend_series(agg: AggregatedDiffusion, current_step: int = 0) -> TrendSeries:
    return TrendSeries(
        new_active_mean=agg.mean_new_per_step,
        cumulative_active_mean=agg.mean_cumulative_per_step,
        current_step=current_step,
    )
