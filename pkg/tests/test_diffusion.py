from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from imlab.diffusion import (
    DiffusionError,
    SeedSet,
    estimate_spread,
    exact_spread_small,
    run_seed,
    simulate_ic,
)
from imlab.graphs import Graph, ProbabilityModel, assign_probabilities

from conftest import bfs_levels, random_graph


def const(graph, p):
    return assign_probabilities(graph, ProbabilityModel.constant(p))


class TestSeedSet:
    def test_sorted_and_deduped(self):
        s = SeedSet.of([3, 1, 1, 2])
        assert s.seeds == (1, 2, 3)

    def test_k_too_small(self):
        with pytest.raises(DiffusionError):
            SeedSet(seeds=(0, 1, 2), k=2)

    def test_out_of_range(self, path3):
        with pytest.raises(DiffusionError):
            SeedSet.of([5]).validate_for(path3.n)

    def test_empty_rejected(self, path3):
        with pytest.raises(DiffusionError):
            SeedSet.of([]).validate_for(path3.n)


class TestSimulateIC:
    def test_deterministic_path(self, path3, seed0):
        run = simulate_ic(const(path3, 1.0), seed0, rng_seed=7)
        assert [s.newly_active for s in run.steps] == [(0,), (1,), (2,)]
        assert [s.activated_arcs for s in run.steps] == [(), ((0, 1),), ((1, 2),)]

    def test_p_zero_halts_immediately(self, seed0):
        g = random_graph(np.random.default_rng(0), n=15, density=0.3)
        run = simulate_ic(const(g, 0.0), SeedSet.of([0, 3]), rng_seed=1)
        assert len(run.steps) == 1
        assert run.steps[0].newly_active == (0, 3)
        assert run.steps[0].activated_arcs == ()

    def test_bernoulli_half(self):
        g = Graph.from_arcs(2, [(0, 1)])
        wg = const(g, 0.5)
        hits = sum(
            1 in simulate_ic(wg, SeedSet.of([0]), rng_seed=run_seed(123, i)).activated
            for i in range(10_000)
        )
        se = np.sqrt(0.25 / 10_000)
        assert abs(hits / 10_000 - 0.5) <= 3 * se + 1e-12

    def test_monotone_single_activation(self):
        g = random_graph(np.random.default_rng(5), n=30, density=0.15)
        run = simulate_ic(const(g, 0.7), SeedSet.of([0, 1]), rng_seed=11)
        seen = set()
        for step in run.steps:
            assert not (set(step.newly_active) & seen)
            seen.update(step.newly_active)
        assert len(run.steps) <= g.n

    def test_arcs_connect_consecutive_frontiers(self):
        g = random_graph(np.random.default_rng(8), n=25, density=0.2)
        run = simulate_ic(const(g, 0.6), SeedSet.of([2]), rng_seed=3)
        for j in range(1, len(run.steps)):
            prev = set(run.steps[j - 1].newly_active)
            cur = set(run.steps[j].newly_active)
            for u, v in run.steps[j].activated_arcs:
                assert u in prev
                assert v in cur

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_p1_matches_bfs_frontiers(self, seed):
        rng = np.random.default_rng(seed)
        g = random_graph(rng, n=25, density=0.1)
        seeds = SeedSet.of(rng.choice(g.n, size=3, replace=False))
        run = simulate_ic(const(g, 1.0), seeds, rng_seed=seed)
        levels = bfs_levels(g, seeds.seeds)
        for j, step in enumerate(run.steps):
            assert set(step.newly_active) == {v for v, d in levels.items() if d == j}
        assert run.activated == set(levels)


class TestEstimateSpread:
    def test_path_half_near_exact(self, path3_half, seed0):
        agg = estimate_spread(path3_half, seed0, runs=10_000, master_seed=4)
        assert 1.70 <= agg.spread_mean <= 1.80

    def test_all_seeds_exact_n(self):
        g = random_graph(np.random.default_rng(2), n=12, density=0.2)
        agg = estimate_spread(const(g, 0.3), SeedSet.of(range(g.n)), runs=5, master_seed=0)
        assert agg.spread_mean == g.n
        assert agg.spread_std == 0.0

    def test_p1_spread_is_reachable_set(self):
        g = random_graph(np.random.default_rng(9), n=30, density=0.1)
        agg = estimate_spread(const(g, 1.0), SeedSet.of([0]), runs=7, master_seed=1)
        assert agg.spread_mean == len(bfs_levels(g, [0]))

    def test_invariants(self):
        g = random_graph(np.random.default_rng(14), n=20, density=0.2)
        agg = estimate_spread(const(g, 0.4), SeedSet.of([0, 5]), runs=200, master_seed=6)
        assert np.isclose(agg.spread_mean, agg.activation_freq.sum())
        cum = agg.mean_cumulative_per_step
        assert np.all(np.diff(cum) >= -1e-12)
        assert abs(cum[-1] - agg.spread_mean) < 1e-9
        assert np.allclose(agg.step_freq.sum(axis=0), agg.activation_freq, atol=1e-9)

    def test_deterministic_and_parallel_identical(self):
        g = random_graph(np.random.default_rng(21), n=25, density=0.15)
        wg = const(g, 0.35)
        seeds = SeedSet.of([1, 2])
        a = estimate_spread(wg, seeds, runs=40, master_seed=77, workers=1)
        b = estimate_spread(wg, seeds, runs=40, master_seed=77, workers=1)
        c = estimate_spread(wg, seeds, runs=40, master_seed=77, workers=3)
        for other in (b, c):
            assert np.array_equal(a.ever_count, other.ever_count)
            assert np.array_equal(a.step_count, other.step_count)
            assert np.array_equal(a.per_run_spread, other.per_run_spread)

    def test_progress_events(self, path3_half, seed0):
        events = []
        estimate_spread(path3_half, seed0, runs=10, master_seed=0,
                        progress=lambda d, t, m: events.append((d, t, m)))
        assert [e[0] for e in events] == list(range(1, 11))
        assert events[-1][1] == 10

    def test_zero_runs_rejected(self, path3_half, seed0):
        with pytest.raises(DiffusionError):
            estimate_spread(path3_half, seed0, runs=0)


class TestExactSpread:
    def test_path_half(self, path3_half, seed0):
        assert exact_spread_small(path3_half, seed0) == pytest.approx(1.75, abs=1e-12)

    def test_single_arc(self):
        g = Graph.from_arcs(2, [(0, 1)])
        wg = assign_probabilities(g, ProbabilityModel.constant(0.3))
        assert exact_spread_small(wg, SeedSet.of([0])) == pytest.approx(1.3, abs=1e-12)

    def test_p1_reachable(self):
        g = random_graph(np.random.default_rng(31), n=8, density=0.2)
        if g.arc_count > 20:
            pytest.skip("random draw too dense")
        assert exact_spread_small(const(g, 1.0), SeedSet.of([0])) == pytest.approx(
            len(bfs_levels(g, [0]))
        )

    def test_too_many_arcs(self):
        g = random_graph(np.random.default_rng(1), n=30, density=0.3)
        assert g.arc_count > 20
        with pytest.raises(DiffusionError):
            exact_spread_small(const(g, 0.5), SeedSet.of([0]))

    def test_monte_carlo_agrees(self):
        ok = 0
        for trial in range(5):
            rng = np.random.default_rng(1000 + trial)
            g = random_graph(rng, n=7, density=0.25)
            if g.arc_count > 14:
                ok += 1
                continue
            prob = rng.uniform(0.05, 0.95, size=g.arc_count)
            wg = assign_probabilities(g, ProbabilityModel.constant(0.5))
            wg = type(wg)(graph=g, prob=prob, model=wg.model)
            seeds = SeedSet.of(rng.choice(g.n, size=2, replace=False))
            exact = exact_spread_small(wg, seeds)
            agg = estimate_spread(wg, seeds, runs=4000, master_seed=trial)
            se = max(agg.spread_std / np.sqrt(4000), 1e-9)
            if abs(agg.spread_mean - exact) <= 4 * se:
                ok += 1
        assert ok >= 4
