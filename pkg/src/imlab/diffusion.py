"""Independent Cascade simulation and Monte-Carlo spread estimation.

One run unfolds step by step: step 0 activates the seeds; at step j>0
every vertex newly activated at j-1 makes one independent attempt per
out-neighbor that was inactive before step j, succeeding with the arc
probability. All successful same-step attempts into a vertex are
recorded as activated arcs. The process halts when a step activates
nothing.

Repetitions are mutually independent: run i draws its coin flips from a
PCG64 stream seeded from (master_seed, i), so aggregation is bit-identical
for identical inputs regardless of execution order or parallelism.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .graphs import WeightedGraph


class DiffusionError(ValueError):
    pass


@dataclass(frozen=True)
class SeedSet:
    """Sorted distinct seed vertex ids plus provenance."""

    seeds: tuple[int, ...]
    k: int
    origin: str = "manual"

    def __post_init__(self) -> None:
        if len(set(self.seeds)) != len(self.seeds):
            raise DiffusionError("seed set contains duplicates")
        if tuple(sorted(self.seeds)) != self.seeds:
            object.__setattr__(self, "seeds", tuple(sorted(self.seeds)))
        if not (len(self.seeds) <= self.k):
            raise DiffusionError(f"|seeds|={len(self.seeds)} exceeds k={self.k}")

    @classmethod
    def of(cls, seeds: Sequence[int], origin: str = "manual", k: int | None = None) -> "SeedSet":
        seeds = tuple(sorted(set(int(s) for s in seeds)))
        return cls(seeds=seeds, k=k if k is not None else len(seeds), origin=origin)

    def validate_for(self, n: int) -> None:
        if not self.seeds:
            raise DiffusionError("seed set is empty")
        if not (0 < self.k <= n):
            raise DiffusionError(f"k={self.k} out of range for {n} vertices")
        if self.seeds[0] < 0 or self.seeds[-1] >= n:
            raise DiffusionError("seed id outside vertex range")


@dataclass(frozen=True)
class DiffusionStep:
    newly_active: tuple[int, ...]
    activated_arcs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class DiffusionRun:
    """Per-step trace of one simulated cascade."""

    steps: tuple[DiffusionStep, ...]
    rng_seed: int
    run_index: int = 0

    @property
    def activated(self) -> set[int]:
        out: set[int] = set()
        for s in self.steps:
            out.update(s.newly_active)
        return out

    def active_at(self, step: int) -> set[int]:
        """Vertices active after `step` steps (cumulative)."""
        out: set[int] = set()
        for s in self.steps[: step + 1]:
            out.update(s.newly_active)
        return out


class IndependentCascade:
    """Diffusion model plugged into the engine: initialize / step / halted.

    Other models can implement the same three methods and register under
    a new name in MODELS.
    """

    name = "independent-cascade"

    def initialize(self, wg: WeightedGraph, seeds: SeedSet, rng: np.random.Generator) -> dict:
        active = np.zeros(wg.graph.n, dtype=bool)
        frontier = np.asarray(seeds.seeds, dtype=np.int64)
        active[frontier] = True
        return {"wg": wg, "rng": rng, "active": active, "frontier": frontier}

    def step(self, state: dict) -> tuple[np.ndarray, list[tuple[int, int]]]:
        """One diffusion step; returns (newly active ids, activated arcs)."""
        wg: WeightedGraph = state["wg"]
        rng: np.random.Generator = state["rng"]
        active: np.ndarray = state["active"]
        g = wg.graph
        arcs: list[tuple[int, int]] = []
        new_flag = np.zeros(g.n, dtype=bool)
        # `active` stays frozen during the loop, so vertices activated
        # earlier in the same step still receive attempts
        for u in state["frontier"]:
            lo, hi = g.out_ptr[u], g.out_ptr[u + 1]
            nbrs = g.out_adj[lo:hi]
            if nbrs.size == 0:
                continue
            coins = rng.random(nbrs.size)
            hits = nbrs[(coins < wg.prob[lo:hi]) & ~active[nbrs]]
            for v in hits:
                arcs.append((int(u), int(v)))
            new_flag[hits] = True
        newly = np.flatnonzero(new_flag)
        active[newly] = True
        state["frontier"] = newly
        return newly, arcs

    def halted(self, state: dict) -> bool:
        return state["frontier"].size == 0


MODELS: dict[str, type] = {"independent-cascade": IndependentCascade}


def simulate_ic(wg: WeightedGraph, seeds: SeedSet, rng_seed: int, run_index: int = 0) -> DiffusionRun:
    """One full Independent Cascade run with per-step arc traces."""
    seeds.validate_for(wg.graph.n)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(rng_seed)))
    model = IndependentCascade()
    state = model.initialize(wg, seeds, rng)
    steps = [DiffusionStep(newly_active=tuple(seeds.seeds), activated_arcs=())]
    while not model.halted(state):
        newly, arcs = model.step(state)
        if newly.size:
            steps.append(
                DiffusionStep(
                    newly_active=tuple(int(v) for v in newly),
                    activated_arcs=tuple(sorted(arcs)),
                )
            )
    return DiffusionRun(steps=tuple(steps), rng_seed=int(rng_seed), run_index=run_index)


def _run_activation_steps(wg: WeightedGraph, seeds: SeedSet, rng_seed: int) -> np.ndarray:
    """First-activation step per vertex (-1 if never activated).

    Same coin-flip stream as simulate_ic, without arc bookkeeping.
    """
    g = wg.graph
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(rng_seed)))
    first_step = np.full(g.n, -1, dtype=np.int32)
    active = np.zeros(g.n, dtype=bool)
    frontier = np.asarray(seeds.seeds, dtype=np.int64)
    first_step[frontier] = 0
    active[frontier] = True
    step = 0
    while frontier.size:
        step += 1
        new_flag = np.zeros(g.n, dtype=bool)
        for u in frontier:
            lo, hi = g.out_ptr[u], g.out_ptr[u + 1]
            nbrs = g.out_adj[lo:hi]
            if nbrs.size == 0:
                continue
            coins = rng.random(nbrs.size)
            new_flag[nbrs[(coins < wg.prob[lo:hi]) & ~active[nbrs]]] = True
        frontier = np.flatnonzero(new_flag)
        first_step[frontier] = step
        active[frontier] = True
    return first_step


def run_seed(master_seed: int, run_index: int) -> int:
    """64-bit per-run stream seed derived from (master_seed, run_index)."""
    return int(np.random.SeedSequence([master_seed, run_index]).generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class AggregatedDiffusion:
    """Per-vertex activation statistics over R independent runs."""

    runs: int
    ever_count: np.ndarray       # [n] runs in which v was ever active
    step_count: np.ndarray       # [T, n] runs in which v activated at exactly step j
    per_run_spread: np.ndarray   # [R] ever-active vertex count of each run

    @property
    def n(self) -> int:
        return int(self.ever_count.size)

    @property
    def num_steps(self) -> int:
        return int(self.step_count.shape[0])

    @property
    def activation_freq(self) -> np.ndarray:
        return self.ever_count / self.runs

    @property
    def step_freq(self) -> np.ndarray:
        return self.step_count / self.runs

    @property
    def mean_new_per_step(self) -> np.ndarray:
        return self.step_count.sum(axis=1) / self.runs

    @property
    def mean_cumulative_per_step(self) -> np.ndarray:
        return np.cumsum(self.mean_new_per_step)

    @property
    def spread_mean(self) -> float:
        return float(self.ever_count.sum() / self.runs)

    @property
    def spread_std(self) -> float:
        if self.runs < 2:
            return 0.0
        return float(np.std(self.per_run_spread, ddof=1))


def _aggregate_chunk(args: tuple) -> tuple[np.ndarray, np.ndarray, list[tuple[int, int]]]:
    wg, seeds, master_seed, indices = args
    n = wg.graph.n
    ever = np.zeros(n, dtype=np.int64)
    step_counts = np.zeros((0, n), dtype=np.int64)
    spreads: list[tuple[int, int]] = []
    for i in indices:
        first = _run_activation_steps(wg, seeds, run_seed(master_seed, i))
        hit = first >= 0
        ever[hit] += 1
        spreads.append((i, int(hit.sum())))
        t = int(first.max()) + 1
        if t > step_counts.shape[0]:
            step_counts = np.vstack([step_counts, np.zeros((t - step_counts.shape[0], n), dtype=np.int64)])
        step_counts[first[hit], np.flatnonzero(hit)] += 1
    return ever, step_counts, spreads


def estimate_spread(
    wg: WeightedGraph,
    seeds: SeedSet,
    runs: int = 100,
    master_seed: int = 0,
    workers: int = 1,
    progress: Callable[[int, int, float], None] | None = None,
) -> AggregatedDiffusion:
    """Aggregate `runs` independent cascades into activation statistics.

    Run i uses the stream seed run_seed(master_seed, i); the merge is a
    sum of integer counts, so the result is identical for any worker
    count. `progress(completed, total, partial_mean)` is called after
    each completed run (serial mode) or chunk (parallel mode).
    """
    if runs < 1:
        raise DiffusionError("need at least one run")
    seeds.validate_for(wg.graph.n)
    n = wg.graph.n
    ever = np.zeros(n, dtype=np.int64)
    step_counts = np.zeros((1, n), dtype=np.int64)
    spread_by_run = np.zeros(runs, dtype=np.int64)

    def merge(chunk_ever, chunk_steps, chunk_spreads) -> None:
        nonlocal step_counts
        ever[:] += chunk_ever
        if chunk_steps.shape[0] > step_counts.shape[0]:
            pad = np.zeros((chunk_steps.shape[0] - step_counts.shape[0], n), dtype=np.int64)
            step_counts = np.vstack([step_counts, pad])
        step_counts[: chunk_steps.shape[0]] += chunk_steps
        for i, s in chunk_spreads:
            spread_by_run[i] = s

    if workers <= 1:
        total_spread = 0
        for i in range(runs):
            first = _run_activation_steps(wg, seeds, run_seed(master_seed, i))
            hit = first >= 0
            ever[hit] += 1
            t = int(first.max()) + 1
            if t > step_counts.shape[0]:
                pad = np.zeros((t - step_counts.shape[0], n), dtype=np.int64)
                step_counts = np.vstack([step_counts, pad])
            step_counts[first[hit], np.flatnonzero(hit)] += 1
            s = int(hit.sum())
            spread_by_run[i] = s
            total_spread += s
            if progress is not None:
                progress(i + 1, runs, total_spread / (i + 1))
    else:
        chunks = [list(range(runs))[c::workers] for c in range(workers)]
        chunks = [c for c in chunks if c]
        done = 0
        total_spread = 0
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for ce, cs, csp in pool.map(
                _aggregate_chunk, [(wg, seeds, master_seed, c) for c in chunks]
            ):
                merge(ce, cs, csp)
                done += len(csp)
                total_spread += sum(s for _, s in csp)
                if progress is not None:
                    progress(done, runs, total_spread / done)
    return AggregatedDiffusion(
        runs=runs, ever_count=ever, step_count=step_counts, per_run_spread=spread_by_run
    )


def exact_spread_small(wg: WeightedGraph, seeds: SeedSet) -> float:
    """Exact expected spread by live-edge enumeration; needs ≤ 20 arcs.

    Every arc is independently live with its probability; the spread is
    the probability-weighted reachable-set size over all 2^m outcomes.
    """
    seeds.validate_for(wg.graph.n)
    g = wg.graph
    m = g.arc_count
    if m > 20:
        raise DiffusionError(f"{m} arcs is too many for live-edge enumeration (max 20)")
    n = g.n
    src, dst, p = g.src, g.dst, wg.prob
    total = 0.0
    chunk = 1 << 16
    for start in range(0, 1 << m, chunk):
        outcomes = np.arange(start, min(start + chunk, 1 << m), dtype=np.uint32)
        live = ((outcomes[:, None] >> np.arange(m, dtype=np.uint32)) & 1).astype(bool)
        weight = np.where(live, p, 1.0 - p).prod(axis=1)
        reach = np.zeros((outcomes.size, n), dtype=bool)
        reach[:, list(seeds.seeds)] = True
        while True:
            before = reach.sum()
            for a in range(m):
                reach[:, dst[a]] |= reach[:, src[a]] & live[:, a]
            if reach.sum() == before:
                break
        total += float((weight * reach.sum(axis=1)).sum())
    return total
