"""Shared run orchestration used by both the CLI and the HTTP service.

Everything here is a thin, deterministic composition of the core
modules; keeping one code path guarantees byte-identical run-store
artifacts whichever entry point drove the run.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from . import advisor
from .diffusion import SeedSet
from .graphs import ProbabilityModel
from .grid import (
    classify_rate,
    density_matrix,
    diffusion_matrix,
    subgraph_of_cells,
    trend_series,
)
from .selection import select
from .store import RunRecord, RunStore


def resolve_seeds(
    store: RunStore,
    graph_ref: str,
    algorithm: str | None,
    k: int | None,
    explicit_seeds: Sequence[int] | None,
    algorithm_rng_seed: int = 0,
) -> SeedSet:
    if explicit_seeds is not None:
        return SeedSet.of(explicit_seeds, origin="manual")
    if algorithm is None or k is None:
        raise ValueError("need either an algorithm with k or an explicit seed list")
    return select(algorithm, store.load_dataset(graph_ref), k, rng_seed=algorithm_rng_seed)


def execute_new_run(
    store: RunStore,
    graph_ref: str,
    seeds: SeedSet,
    model: ProbabilityModel,
    r: int,
    master_seed: int,
    m: int,
    layout_iterations: int,
    layout_seed: int = 0,
    parent_run_id: str | None = None,
    workers: int = 1,
    progress: Callable[[int, int, float], None] | None = None,
) -> RunRecord:
    record = store.create_run(
        graph_ref=graph_ref,
        seeds=seeds,
        model=model,
        r=r,
        master_seed=master_seed,
        m=m,
        layout_iterations=layout_iterations,
        layout_seed=layout_seed,
        parent_run_id=parent_run_id,
    )
    return store.execute_run(record, workers=workers, progress=progress)


def matrices_payload(store: RunStore, run_id: str, step: int, m: int | None, mode: str) -> dict:
    """Density + diffusion matrices, trend series, and rate classes."""
    record = store.load_run(run_id)
    agg = store.load_aggregation(run_id)
    grid = store.grid_for(record, m)
    dens = density_matrix(grid)
    diff = diffusion_matrix(grid, agg, step, mode)
    cum = diffusion_matrix(grid, agg, step, "cumulative-active")
    trend = trend_series(agg, current_step=step)
    rates = np.divide(
        cum.values, dens.counts, out=np.full_like(cum.values, -1.0), where=dens.counts > 0
    )
    classes = [
        [None if dens.counts[r_][c_] == 0 else classify_rate(float(rates[r_][c_]))
         for c_ in range(grid.m)]
        for r_ in range(grid.m)
    ]
    return {
        "run_id": run_id,
        "m": grid.m,
        "step": step,
        "num_steps": agg.num_steps,
        "mode": mode,
        "density": dens.counts.tolist(),
        "diffusion": diff.values.tolist(),
        "influence_rate": [
            [None if dens.counts[r_][c_] == 0 else float(rates[r_][c_]) for c_ in range(grid.m)]
            for r_ in range(grid.m)
        ],
        "rate_class": classes,
        "trend": {
            "new_active_mean": trend.new_active_mean.tolist(),
            "cumulative_active_mean": trend.cumulative_active_mean.tolist(),
            "current_step": trend.current_step,
        },
        "spread_mean": agg.spread_mean,
        "spread_std": agg.spread_std,
    }


def detail_payload(store: RunStore, run_id: str, cells: tuple[int, int, int, int], step: int, m: int | None = None) -> dict:
    record = store.load_run(run_id)
    graph = store.load_dataset(record.graph_ref)
    layout = store.get_or_compute_layout(record.graph_ref, record.layout_iterations, record.layout_seed)
    grid = store.grid_for(record, m)
    trace = store.load_trace(run_id)
    step = min(step, len(trace.steps) - 1)
    bundle = subgraph_of_cells(grid, graph, layout, cells, run=trace, step=step)
    return {
        "run_id": run_id,
        "step": step,
        "vertices": list(bundle.vertices),
        "internal_arcs": [list(a) for a in bundle.internal_arcs],
        "boundary_arcs": [list(a) for a in bundle.boundary_arcs],
        "roles": {str(v): role for v, role in bundle.roles.items()},
        "positions": {str(v): list(p) for v, p in bundle.positions.items()},
    }


def suggestion_for_run(store: RunStore, run_id: str, n: int) -> advisor.Suggestion:
    record = store.load_run(run_id)
    graph = store.load_dataset(record.graph_ref)
    agg = store.load_aggregation(run_id)
    grid = store.grid_for(record)
    return advisor.suggest(graph, grid, agg, record.seeds, n=n)


def suggestion_payload(s: advisor.Suggestion) -> dict:
    return {
        "n": s.n,
        "truncated": s.truncated,
        "removals": [
            {"vertex": c.vertex, "degree": c.degree, "cell": list(c.cell)} for c in s.removals
        ],
        "promotions": [
            {"vertex": c.vertex, "degree": c.degree, "cell": list(c.cell)} for c in s.promotions
        ],
        "rationale": s.rationale,
    }


def run_modified(
    store: RunStore,
    run_id: str,
    accepted_removals: Sequence[int],
    accepted_promotions: Sequence[int],
    n: int,
    workers: int = 1,
    progress: Callable[[int, int, float], None] | None = None,
) -> RunRecord:
    """Apply accepted swaps from a fresh suggestion and rerun."""
    record = store.load_run(run_id)
    suggestion = suggestion_for_run(store, run_id, n)
    new_seeds = advisor.apply_modification(
        record.seeds, suggestion, tuple(accepted_removals), tuple(accepted_promotions)
    )
    return execute_new_run(
        store,
        graph_ref=record.graph_ref,
        seeds=new_seeds,
        model=record.model,
        r=record.r,
        master_seed=record.master_seed,
        m=record.m,
        layout_iterations=record.layout_iterations,
        layout_seed=record.layout_seed,
        parent_run_id=record.run_id,
        workers=workers,
        progress=progress,
    )


def run_view(store: RunStore, run_id: str) -> advisor.RunView:
    record = store.load_run(run_id)
    return advisor.RunView(
        graph_hash=record.graph_ref,
        grid=store.grid_for(record),
        agg=store.load_aggregation(run_id),
    )


def compare_payload(store: RunStore, run_a: str, run_b: str) -> dict:
    report = advisor.compare_runs(run_view(store, run_a), run_view(store, run_b))
    report["run_a"] = run_a
    report["run_b"] = run_b
    return report
