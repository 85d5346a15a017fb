from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from imlab.diffusion import SeedSet
from imlab.graphs import ProbabilityModel
from imlab import pipeline
from imlab.store import RunStore, StoreError

EDGES = "0 1\n1 2\n2 3\n3 0\n0 2\n1 3\n4 0\n4 1\n"


@pytest.fixture
def store(tmp_path):
    return RunStore(tmp_path / "data")


@pytest.fixture
def graph_ref(store):
    return store.ingest_dataset("toy", EDGES, "undirected-as-bidirectional")


def run_once(store, graph_ref, master_seed=7, seeds=(0, 1), r=20, m=3):
    return pipeline.execute_new_run(
        store,
        graph_ref=graph_ref,
        seeds=SeedSet.of(seeds),
        model=ProbabilityModel.constant(0.4),
        r=r,
        master_seed=master_seed,
        m=m,
        layout_iterations=30,
    )


class TestDatasets:
    def test_ingest_writes_manifest(self, store, graph_ref):
        manifest = store.manifest(graph_ref)
        assert manifest["nodes"] == 5
        assert manifest["arcs"] == 16
        assert (store.root / "datasets" / graph_ref / "edges.txt").exists()

    def test_idempotent_on_identical_content(self, store, graph_ref):
        assert store.ingest_dataset("toy-again", EDGES, "undirected-as-bidirectional") == graph_ref
        assert len(store.list_datasets()) == 1

    def test_malformed_rejected(self, store):
        from imlab.graphs import GraphError

        with pytest.raises(GraphError, match=":2:"):
            store.ingest_dataset("bad", "0 1\nnope\n", "directed")

    def test_unknown_ref(self, store):
        with pytest.raises(StoreError):
            store.load_dataset("feedbeef")

    def test_reload_from_disk(self, tmp_path, store, graph_ref):
        fresh = RunStore(store.root)
        g = fresh.load_dataset(graph_ref)
        assert g.n == 5


class TestLayoutCache:
    def test_cached_layout_identical(self, store, graph_ref):
        a = store.get_or_compute_layout(graph_ref, 30, 0)
        fresh = RunStore(store.root)
        b = fresh.get_or_compute_layout(graph_ref, 30, 0)
        assert np.array_equal(a.positions, b.positions)
        assert len(list((store.root / "layouts").glob("*.json"))) == 1


class TestRuns:
    def test_execute_and_reload(self, store, graph_ref):
        record = run_once(store, graph_ref)
        assert record.status == "done"
        loaded = store.load_run(record.run_id)
        assert loaded.status == "done"
        assert loaded.seeds.seeds == (0, 1)
        agg = store.load_aggregation(record.run_id)
        assert agg.runs == 20
        trace = store.load_trace(record.run_id)
        assert trace.steps[0].newly_active == (0, 1)

    def test_run_id_content_addressed(self, store, graph_ref):
        a = run_once(store, graph_ref)
        b = run_once(store, graph_ref)
        assert a.run_id == b.run_id
        c = run_once(store, graph_ref, master_seed=8)
        assert c.run_id != a.run_id

    def test_immutable_once_done(self, store, graph_ref):
        record = run_once(store, graph_ref)
        path = store.run_dir(record.run_id) / "aggregation.json"
        before = path.read_bytes()
        store.execute_run(record)  # no-op rerun
        assert path.read_bytes() == before

    def test_aggregation_missing(self, store, graph_ref):
        record = store.create_run(
            graph_ref, SeedSet.of([0]), ProbabilityModel.constant(0.1), r=5, master_seed=0
        )
        with pytest.raises(StoreError):
            store.load_aggregation(record.run_id)

    def test_bad_r(self, store, graph_ref):
        with pytest.raises(StoreError):
            store.create_run(graph_ref, SeedSet.of([0]), ProbabilityModel.constant(0.1), r=0, master_seed=0)


class TestDeterminism:
    def test_byte_identical_artifacts_across_stores_and_workers(self, tmp_path, graph_ref):
        roots = [tmp_path / "a", tmp_path / "b", tmp_path / "c"]
        run_ids = []
        for root, workers in zip(roots, (1, 1, 2)):
            s = RunStore(root)
            ref = s.ingest_dataset("toy", EDGES, "undirected-as-bidirectional")
            record = pipeline.execute_new_run(
                s,
                graph_ref=ref,
                seeds=SeedSet.of((0, 1)),
                model=ProbabilityModel.constant(0.4),
                r=12,
                master_seed=3,
                m=3,
                layout_iterations=30,
                workers=workers,
            )
            run_ids.append(record.run_id)
        assert len(set(run_ids)) == 1
        ref_dir = roots[0] / "runs" / run_ids[0]
        for other_root in roots[1:]:
            other_dir = other_root / "runs" / run_ids[0]
            for f in sorted(ref_dir.iterdir()):
                if f.name == "meta.json":  # wall-clock bookkeeping, not part of the contract
                    continue
                assert (other_dir / f.name).read_bytes() == f.read_bytes(), f.name


class TestPipelinePayloads:
    def test_matrices_payload_consistent(self, store, graph_ref):
        record = run_once(store, graph_ref)
        agg = store.load_aggregation(record.run_id)
        payload = pipeline.matrices_payload(store, record.run_id, step=agg.num_steps - 1, m=None, mode="cumulative-active")
        dens = np.asarray(payload["density"])
        diff = np.asarray(payload["diffusion"])
        assert dens.sum() == 5
        assert diff.sum() == pytest.approx(agg.spread_mean, abs=1e-6)
        assert payload["trend"]["cumulative_active_mean"][-1] == pytest.approx(agg.spread_mean)

    def test_reslice_m_preserves_total(self, store, graph_ref):
        record = run_once(store, graph_ref)
        for m in (1, 2, 4):
            payload = pipeline.matrices_payload(store, record.run_id, step=0, m=m, mode="cumulative-active")
            assert np.asarray(payload["density"]).sum() == 5
            assert np.asarray(payload["diffusion"]).sum() == pytest.approx(2.0)  # the two seeds

    def test_modified_run_links_parent(self, store, graph_ref):
        record = run_once(store, graph_ref, seeds=(0, 1), r=10)
        child = pipeline.run_modified(
            store,
            record.run_id,
            accepted_removals=pipeline.suggestion_for_run(store, record.run_id, 1).removal_ids(),
            accepted_promotions=pipeline.suggestion_for_run(store, record.run_id, 1).promotion_ids(),
            n=1,
        )
        assert child.parent_run_id == record.run_id
        assert len(child.seeds.seeds) == 2
        report = pipeline.compare_payload(store, record.run_id, child.run_id)
        assert "relative_spread_delta" in report
