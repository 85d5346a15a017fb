"""Append-only on-disk store for datasets, layouts, and runs.

Layout on disk:

    <root>/datasets/<graph_ref>/   edges.txt, manifest.json, idmap.json
    <root>/layouts/<key>.json      cached layout per (graph, iterations, seed)
    <root>/runs/<run_id>/          record.json, seeds.json, aggregation.json,
                                   trace_run0.json, meta.json

All schema files are canonical JSON (sorted keys, fixed separators), so
identical inputs produce byte-identical artifacts whichever entry point
(CLI or service) wrote them. meta.json is the one exception: it carries
wall-clock status bookkeeping and is not part of the determinism
contract. run_id is a content hash of the run inputs.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .diffusion import (
    AggregatedDiffusion,
    DiffusionRun,
    DiffusionStep,
    SeedSet,
    estimate_spread,
    run_seed,
    simulate_ic,
)
from .graphs import Graph, GraphError, ProbabilityModel, assign_probabilities, load_graph
from .grid import Grid, build_grid
from .layout import Layout, compute_layout

SCHEMA_RECORD = "imlab/run-record@1"
SCHEMA_AGGREGATION = "imlab/aggregation@1"
SCHEMA_TRACE = "imlab/trace@1"
SCHEMA_LAYOUT = "imlab/layout@1"
SCHEMA_SEEDS = "imlab/seeds@1"

DEFAULT_LAYOUT_ITERATIONS = 500
DEFAULT_GRID_M = 10


class StoreError(ValueError):
    pass


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


@dataclass(frozen=True)
class RunRecord:
    """Immutable persisted bundle of one simulated configuration."""

    run_id: str
    graph_ref: str
    model: ProbabilityModel
    seeds: SeedSet
    r: int
    master_seed: int
    m: int
    layout_iterations: int
    layout_seed: int
    parent_run_id: str | None = None
    status: str = "pending"

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_RECORD,
            "run_id": self.run_id,
            "graph_ref": self.graph_ref,
            "model": self.model.describe(),
            "seeds": {"ids": list(self.seeds.seeds), "k": self.seeds.k, "origin": self.seeds.origin},
            "r": self.r,
            "master_seed": self.master_seed,
            "m": self.m,
            "layout_iterations": self.layout_iterations,
            "layout_seed": self.layout_seed,
            "parent_run_id": self.parent_run_id,
        }

    @classmethod
    def from_json(cls, d: dict, status: str = "pending") -> "RunRecord":
        return cls(
            run_id=d["run_id"],
            graph_ref=d["graph_ref"],
            model=ProbabilityModel.from_description(d["model"]),
            seeds=SeedSet.of(d["seeds"]["ids"], origin=d["seeds"]["origin"], k=d["seeds"]["k"]),
            r=d["r"],
            master_seed=d["master_seed"],
            m=d["m"],
            layout_iterations=d["layout_iterations"],
            layout_seed=d["layout_seed"],
            parent_run_id=d.get("parent_run_id"),
            status=status,
        )


def _run_id_for(record_fields: dict) -> str:
    return hashlib.sha256(canonical_json(record_fields).encode()).hexdigest()[:16]


def aggregation_to_json(agg: AggregatedDiffusion) -> dict:
    return {
        "schema": SCHEMA_AGGREGATION,
        "runs": agg.runs,
        "ever_count": agg.ever_count.tolist(),
        "step_count": agg.step_count.tolist(),
        "per_run_spread": agg.per_run_spread.tolist(),
    }


def aggregation_from_json(d: dict) -> AggregatedDiffusion:
    return AggregatedDiffusion(
        runs=d["runs"],
        ever_count=np.asarray(d["ever_count"], dtype=np.int64),
        step_count=np.asarray(d["step_count"], dtype=np.int64),
        per_run_spread=np.asarray(d["per_run_spread"], dtype=np.int64),
    )


def trace_to_json(run: DiffusionRun) -> dict:
    return {
        "schema": SCHEMA_TRACE,
        "rng_seed": run.rng_seed,
        "run_index": run.run_index,
        "steps": [
            {"newly_active": list(s.newly_active), "activated_arcs": [list(a) for a in s.activated_arcs]}
            for s in run.steps
        ],
    }


def trace_from_json(d: dict) -> DiffusionRun:
    return DiffusionRun(
        steps=tuple(
            DiffusionStep(
                newly_active=tuple(s["newly_active"]),
                activated_arcs=tuple(tuple(a) for a in s["activated_arcs"]),
            )
            for s in d["steps"]
        ),
        rng_seed=d["rng_seed"],
        run_index=d["run_index"],
    )


class RunStore:
    """Directory-per-run persistence; completed runs are immutable."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        (self.root / "datasets").mkdir(parents=True, exist_ok=True)
        (self.root / "layouts").mkdir(exist_ok=True)
        (self.root / "runs").mkdir(exist_ok=True)
        self._graph_cache: dict[str, Graph] = {}
        self._layout_cache: dict[str, Layout] = {}

    # -- datasets ---------------------------------------------------------

    def ingest_dataset(self, name: str, payload: str, directedness: str) -> str:
        """Store an edge-list payload; idempotent on identical graph content."""
        tmp = self.root / "datasets" / ".incoming.txt"
        tmp.write_text(payload)
        try:
            graph = load_graph(tmp, directedness)
        finally:
            tmp.unlink(missing_ok=True)
        ref = graph.content_hash()[:12]
        ddir = self.root / "datasets" / ref
        if not ddir.exists():
            ddir.mkdir()
            (ddir / "edges.txt").write_text(payload)
            (ddir / "idmap.json").write_text(
                canonical_json({"labels": graph.labels.tolist()})
            )
            (ddir / "manifest.json").write_text(
                canonical_json(
                    {
                        "schema": "imlab/manifest@1",
                        "dataset": name,
                        "directedness": directedness,
                        "nodes": graph.n,
                        "arcs": graph.arc_count,
                        "duplicates_collapsed": graph.duplicates_collapsed,
                        "self_loops_dropped": graph.self_loops_dropped,
                        "id_map": "idmap.json",
                    }
                )
            )
        self._graph_cache[ref] = graph
        return ref

    def ingest_dataset_file(self, name: str, path: str | Path, directedness: str) -> str:
        return self.ingest_dataset(name, Path(path).read_text(), directedness)

    def manifest(self, graph_ref: str) -> dict:
        p = self.root / "datasets" / graph_ref / "manifest.json"
        if not p.exists():
            raise StoreError(f"unknown dataset {graph_ref!r}")
        return json.loads(p.read_text())

    def list_datasets(self) -> list[dict]:
        out = []
        for d in sorted((self.root / "datasets").iterdir()):
            if d.is_dir():
                m = json.loads((d / "manifest.json").read_text())
                m["graph_ref"] = d.name
                out.append(m)
        return out

    def load_dataset(self, graph_ref: str) -> Graph:
        if graph_ref in self._graph_cache:
            return self._graph_cache[graph_ref]
        manifest = self.manifest(graph_ref)
        graph = load_graph(
            self.root / "datasets" / graph_ref / "edges.txt", manifest["directedness"]
        )
        self._graph_cache[graph_ref] = graph
        return graph

    # -- layouts ----------------------------------------------------------

    def get_or_compute_layout(self, graph_ref: str, iterations: int, rng_seed: int) -> Layout:
        key = f"{graph_ref}__it{iterations}__s{rng_seed}"
        if key in self._layout_cache:
            return self._layout_cache[key]
        path = self.root / "layouts" / f"{key}.json"
        if path.exists():
            d = json.loads(path.read_text())
            layout = Layout(
                positions=np.asarray(d["positions"]),
                algorithm=d["algorithm"],
                iterations=d["iterations"],
                rng_seed=d["rng_seed"],
            )
        else:
            layout = compute_layout(self.load_dataset(graph_ref), iterations, rng_seed)
            path.write_text(
                canonical_json(
                    {
                        "schema": SCHEMA_LAYOUT,
                        "algorithm": layout.algorithm,
                        "iterations": layout.iterations,
                        "rng_seed": layout.rng_seed,
                        "positions": layout.positions.tolist(),
                    }
                )
            )
        self._layout_cache[key] = layout
        return layout

    # -- runs -------------------------------------------------------------

    def run_dir(self, run_id: str) -> Path:
        return self.root / "runs" / run_id

    def create_run(
        self,
        graph_ref: str,
        seeds: SeedSet,
        model: ProbabilityModel,
        r: int,
        master_seed: int,
        m: int = DEFAULT_GRID_M,
        layout_iterations: int = DEFAULT_LAYOUT_ITERATIONS,
        layout_seed: int = 0,
        parent_run_id: str | None = None,
    ) -> RunRecord:
        if r < 1:
            raise StoreError(f"r={r} must be at least 1")
        graph = self.load_dataset(graph_ref)
        seeds.validate_for(graph.n)
        fields = {
            "graph_ref": graph_ref,
            "model": model.describe(),
            "seeds": list(seeds.seeds),
            "k": seeds.k,
            "origin": seeds.origin,
            "r": r,
            "master_seed": master_seed,
            "m": m,
            "layout_iterations": layout_iterations,
            "layout_seed": layout_seed,
            "parent_run_id": parent_run_id,
        }
        record = RunRecord(
            run_id=_run_id_for(fields),
            graph_ref=graph_ref,
            model=model,
            seeds=seeds,
            r=r,
            master_seed=master_seed,
            m=m,
            layout_iterations=layout_iterations,
            layout_seed=layout_seed,
            parent_run_id=parent_run_id,
        )
        rdir = self.run_dir(record.run_id)
        if (rdir / "aggregation.json").exists():
            return self.load_run(record.run_id)
        rdir.mkdir(parents=True, exist_ok=True)
        (rdir / "record.json").write_text(canonical_json(record.to_json()))
        (rdir / "seeds.json").write_text(
            canonical_json(
                {
                    "schema": SCHEMA_SEEDS,
                    "ids": list(seeds.seeds),
                    "k": seeds.k,
                    "origin": seeds.origin,
                }
            )
        )
        self._write_meta(record.run_id, "pending")
        return record

    def _write_meta(self, run_id: str, status: str) -> None:
        # atomic replace: readers may poll meta.json while a run executes
        target = self.run_dir(run_id) / "meta.json"
        tmp = target.with_suffix(".json.tmp")
        tmp.write_text(json.dumps({"status": status, "updated_at": time.time()}) + "\n")
        tmp.replace(target)

    def execute_run(
        self,
        record: RunRecord,
        workers: int = 1,
        progress: Callable[[int, int, float], None] | None = None,
    ) -> RunRecord:
        """Simulate, aggregate, and persist; returns the completed record."""
        rdir = self.run_dir(record.run_id)
        if (rdir / "aggregation.json").exists():
            return replace(record, status="done")
        self._write_meta(record.run_id, "running")
        try:
            graph = self.load_dataset(record.graph_ref)
            wg = assign_probabilities(graph, record.model)
            # layout is per-graph and cached; compute before the long part
            self.get_or_compute_layout(
                record.graph_ref, record.layout_iterations, record.layout_seed
            )
            agg = estimate_spread(
                wg, record.seeds, runs=record.r, master_seed=record.master_seed,
                workers=workers, progress=progress,
            )
            trace = simulate_ic(wg, record.seeds, run_seed(record.master_seed, 0), run_index=0)
        except Exception:
            self._write_meta(record.run_id, "failed")
            raise
        (rdir / "aggregation.json").write_text(canonical_json(aggregation_to_json(agg)))
        (rdir / "trace_run0.json").write_text(canonical_json(trace_to_json(trace)))
        self._write_meta(record.run_id, "done")
        return replace(record, status="done")

    def load_run(self, run_id: str) -> RunRecord:
        rdir = self.run_dir(run_id)
        if not (rdir / "record.json").exists():
            raise StoreError(f"unknown run {run_id!r}")
        meta = json.loads((rdir / "meta.json").read_text())
        return RunRecord.from_json(json.loads((rdir / "record.json").read_text()), status=meta["status"])

    def list_runs(self) -> list[RunRecord]:
        out = []
        for d in sorted((self.root / "runs").iterdir()):
            if (d / "record.json").exists():
                out.append(self.load_run(d.name))
        return out

    def load_aggregation(self, run_id: str) -> AggregatedDiffusion:
        p = self.run_dir(run_id) / "aggregation.json"
        if not p.exists():
            raise StoreError(f"run {run_id!r} has no completed aggregation")
        return aggregation_from_json(json.loads(p.read_text()))

    def load_trace(self, run_id: str) -> DiffusionRun:
        p = self.run_dir(run_id) / "trace_run0.json"
        if not p.exists():
            raise StoreError(f"run {run_id!r} has no stored trace")
        return trace_from_json(json.loads(p.read_text()))

    def grid_for(self, record: RunRecord, m: int | None = None) -> Grid:
        layout = self.get_or_compute_layout(
            record.graph_ref, record.layout_iterations, record.layout_seed
        )
        return build_grid(layout, m if m is not None else record.m)
