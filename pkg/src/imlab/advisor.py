"""Seed-set tuning: removal/promotion suggestions and run comparison.

Removals are the lowest-degree seeds in the highest-influence-rate cell;
promotions are the highest-degree non-seeds in the lowest-rate cell.
When a cell runs out of candidates the search continues with the
next-ranked cell, and both lists are truncated to equal length so the
seed count k is preserved by an accept-all.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diffusion import AggregatedDiffusion, SeedSet
from .graphs import Graph
from .grid import Grid, density_matrix, diffusion_matrix

DEFAULT_SUGGESTION_COUNT = 20


class AdvisorError(ValueError):
    pass


@dataclass(frozen=True)
class Candidate:
    vertex: int
    degree: int
    cell: tuple[int, int]


@dataclass(frozen=True)
class Suggestion:
    removals: tuple[Candidate, ...]
    promotions: tuple[Candidate, ...]
    n: int
    rationale: dict[str, float] = field(default_factory=dict)  # "row,col" -> rate
    truncated: bool = False

    def removal_ids(self) -> tuple[int, ...]:
        return tuple(c.vertex for c in self.removals)

    def promotion_ids(self) -> tuple[int, ...]:
        return tuple(c.vertex for c in self.promotions)


def _ranked_cells(grid: Grid, agg: AggregatedDiffusion) -> list[tuple[tuple[int, int], float, int]]:
    """Nonempty cells as ((row, col), rate, density) at the final step."""
    dm = diffusion_matrix(grid, agg, step=agg.num_steps - 1, mode="cumulative-active")
    counts = density_matrix(grid).counts
    cells = []
    for r in range(grid.m):
        for c in range(grid.m):
            d = int(counts[r, c])
            if d > 0:
                cells.append(((r, c), float(dm.values[r, c] / d), d))
    return cells


def _pick(
    cells: list[tuple[tuple[int, int], float, int]],
    grid: Grid,
    degrees: np.ndarray,
    eligible: np.ndarray,
    n: int,
    prefer_low_degree: bool,
) -> list[Candidate]:
    picked: list[Candidate] = []
    for cell, _rate, _dens in cells:
        ids = [v for v in grid.members_of(*cell) if eligible[v]]
        ids.sort(key=lambda v: (degrees[v] if prefer_low_degree else -degrees[v], v))
        for v in ids:
            picked.append(Candidate(vertex=v, degree=int(degrees[v]), cell=cell))
            if len(picked) == n:
                return picked
    return picked


def suggest(graph: Graph, grid: Grid, agg: AggregatedDiffusion, seeds: SeedSet, n: int = DEFAULT_SUGGESTION_COUNT) -> Suggestion:
    """Propose n seed removals and n promotions from cell influence rates.

    Ties on rate prefer the denser cell, then the smaller (row, col);
    ties on degree prefer the smaller vertex id.
    """
    if n < 1:
        raise AdvisorError("suggestion count must be at least 1")
    degrees = graph.total_degrees()
    cells = _ranked_cells(grid, agg)
    by_rate_desc = sorted(cells, key=lambda t: (-t[1], -t[2], t[0]))
    by_rate_asc = sorted(cells, key=lambda t: (t[1], -t[2], t[0]))

    is_seed = np.zeros(graph.n, dtype=bool)
    is_seed[list(seeds.seeds)] = True
    removals = _pick(by_rate_desc, grid, degrees, is_seed, n, prefer_low_degree=True)
    promotions = _pick(by_rate_asc, grid, degrees, ~is_seed, n, prefer_low_degree=False)

    size = min(len(removals), len(promotions))
    rationale = {f"{r},{c}": rate for (r, c), rate, _ in cells}
    return Suggestion(
        removals=tuple(removals[:size]),
        promotions=tuple(promotions[:size]),
        n=n,
        rationale=rationale,
        truncated=size < n,
    )


def apply_modification(
    seeds: SeedSet,
    suggestion: Suggestion,
    accepted_removals: tuple[int, ...] | list[int],
    accepted_promotions: tuple[int, ...] | list[int],
    allow_size_change: bool = False,
) -> SeedSet:
    """New SeedSet with the accepted swaps applied; the old set is untouched."""
    rem = tuple(sorted(accepted_removals))
    pro = tuple(sorted(accepted_promotions))
    if not set(rem) <= set(suggestion.removal_ids()):
        raise AdvisorError("accepted removals are not all part of the suggestion")
    if not set(pro) <= set(suggestion.promotion_ids()):
        raise AdvisorError("accepted promotions are not all part of the suggestion")
    if len(rem) != len(pro) and not allow_size_change:
        raise AdvisorError(
            f"{len(rem)} removals vs {len(pro)} promotions would change k; "
            "pass allow_size_change to permit this"
        )
    new_ids = (set(seeds.seeds) - set(rem)) | set(pro)
    if len(new_ids) != len(seeds.seeds) - len(rem) + len(pro):
        raise AdvisorError("modification would produce duplicate seeds")
    k = seeds.k if len(new_ids) <= seeds.k else len(new_ids)
    return SeedSet.of(sorted(new_ids), origin="manual", k=k)


@dataclass(frozen=True)
class RunView:
    """The slice of a run record that comparison needs."""

    graph_hash: str
    grid: Grid
    agg: AggregatedDiffusion


def compare_runs(a: RunView, b: RunView) -> dict:
    """Deterministic comparison report between two completed runs.

    Both runs must share graph and grid resolution. Trend curves of
    different lengths are padded by holding the final cumulative value.
    """
    if a.graph_hash != b.graph_hash:
        raise AdvisorError("runs use different graphs")
    if a.grid.m != b.grid.m:
        raise AdvisorError(f"grid resolutions differ: {a.grid.m} vs {b.grid.m}")

    sa, sb = a.agg.spread_mean, b.agg.spread_mean
    se = float(
        np.sqrt(
            a.agg.spread_std**2 / a.agg.runs + b.agg.spread_std**2 / b.agg.runs
        )
    )
    t = max(a.agg.num_steps, b.agg.num_steps)

    def padded(agg: AggregatedDiffusion) -> tuple[np.ndarray, np.ndarray]:
        new = np.zeros(t)
        new[: agg.num_steps] = agg.mean_new_per_step
        cum = np.full(t, agg.mean_cumulative_per_step[-1])
        cum[: agg.num_steps] = agg.mean_cumulative_per_step
        return new, cum

    new_a, cum_a = padded(a.agg)
    new_b, cum_b = padded(b.agg)

    dm_a = diffusion_matrix(a.grid, a.agg, a.agg.num_steps - 1).values
    dm_b = diffusion_matrix(b.grid, b.agg, b.agg.num_steps - 1).values
    dens_a = density_matrix(a.grid).counts
    dens_b = density_matrix(b.grid).counts
    rate_a = np.divide(dm_a, dens_a, out=np.zeros_like(dm_a), where=dens_a > 0)
    rate_b = np.divide(dm_b, dens_b, out=np.zeros_like(dm_b), where=dens_b > 0)

    return {
        "spread_mean_a": sa,
        "spread_mean_b": sb,
        "spread_std_a": a.agg.spread_std,
        "spread_std_b": b.agg.spread_std,
        "spread_delta": sb - sa,
        "relative_spread_delta": (sb - sa) / sa if sa else 0.0,
        "spread_delta_se": se,
        "trend_new_delta": (new_b - new_a).tolist(),
        "trend_cumulative_delta": (cum_b - cum_a).tolist(),
        "cell_rate_delta": (rate_b - rate_a).tolist(),
    }
