"""HTTP API over the run store: the full load -> seed -> simulate ->
matrices -> suggest -> modify -> re-simulate workflow.

Simulations execute on a background thread pool; progress is exposed as
a server-sent event stream (one JSON event per completed run, terminal
event carries the final spread). Completed runs are immutable, so reads
need no locking.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor

from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse
from pydantic import BaseModel, Field

from . import pipeline
from .advisor import AdvisorError
from .config import Config
from .diffusion import DiffusionError
from .graphs import GraphError, ProbabilityModel
from .grid import GridError
from .selection import SelectionError
from .store import DEFAULT_GRID_M, DEFAULT_LAYOUT_ITERATIONS, RunStore, StoreError

USER_ERRORS = (GraphError, GridError, DiffusionError, SelectionError, AdvisorError, StoreError, ValueError)


class DatasetIn(BaseModel):
    name: str
    edge_list: str
    directedness: str = "directed"


class AlgorithmIn(BaseModel):
    name: str
    k: int
    rng_seed: int = 0


class ModelIn(BaseModel):
    kind: str = "weighted-cascade"
    p: float | None = None
    choices: list[float] | None = None
    rng_seed: int | None = None

    def build(self) -> ProbabilityModel:
        if self.kind == "constant":
            return ProbabilityModel.constant(self.p if self.p is not None else -1.0)
        if self.kind == "weighted-cascade":
            return ProbabilityModel.weighted_cascade()
        if self.kind == "trivalency":
            return ProbabilityModel.trivalency(
                self.choices or (0.1, 0.01, 0.001), self.rng_seed or 0
            )
        raise GraphError(f"unknown probability model {self.kind!r}")


class RunIn(BaseModel):
    graph_ref: str
    algorithm: AlgorithmIn | None = None
    seeds: list[int] | None = None
    model: ModelIn = Field(default_factory=ModelIn)
    r: int = 100
    master_seed: int = 0
    m: int = DEFAULT_GRID_M
    layout_iterations: int = DEFAULT_LAYOUT_ITERATIONS
    layout_seed: int = 0


class ModifiedIn(BaseModel):
    accepted_removals: list[int]
    accepted_promotions: list[int]
    n: int = 20


class _Progress:
    """Per-run event log shared between the worker and SSE subscribers."""

    def __init__(self) -> None:
        self.cond = threading.Condition()
        self.events: list[dict] = []
        self.done = False
        self.error: str | None = None

    def push(self, event: dict, terminal: bool = False) -> None:
        with self.cond:
            self.events.append(event)
            if terminal:
                self.done = True
            self.cond.notify_all()


def create_app(store_root: str, workers: int = 1) -> FastAPI:
    app = FastAPI(title="imlab")
    store = RunStore(store_root)
    pool = ThreadPoolExecutor(max_workers=max(2, workers))
    trackers: dict[str, _Progress] = {}
    trackers_lock = threading.Lock()

    def _submit(record_id: str, execute) -> None:
        with trackers_lock:
            if record_id in trackers:
                return
            tracker = trackers[record_id] = _Progress()

        def progress(done: int, total: int, partial_mean: float) -> None:
            tracker.push(
                {"completed": done, "total": total, "partial_spread_mean": partial_mean},
                terminal=done == total,
            )

        def job() -> None:
            try:
                execute(progress)
            except Exception as exc:  # surfaced via run meta status + stream
                tracker.error = str(exc)
                tracker.push({"error": str(exc)}, terminal=True)

        pool.submit(job)

    def _user_error(exc: Exception) -> HTTPException:
        missing = isinstance(exc, StoreError) and "unknown" in str(exc)
        return HTTPException(status_code=404 if missing else 400, detail=str(exc))

    @app.post("/datasets")
    def post_dataset(body: DatasetIn):
        try:
            ref = store.ingest_dataset(body.name, body.edge_list, body.directedness)
        except USER_ERRORS as exc:
            raise _user_error(exc)
        m = store.manifest(ref)
        return {"graph_ref": ref, "nodes": m["nodes"], "arcs": m["arcs"]}

    @app.get("/datasets")
    def get_datasets():
        return store.list_datasets()

    @app.get("/datasets/{graph_ref}")
    def get_dataset(graph_ref: str):
        try:
            return store.manifest(graph_ref)
        except USER_ERRORS as exc:
            raise _user_error(exc)

    @app.post("/runs", status_code=202)
    def post_run(body: RunIn):
        try:
            seeds = pipeline.resolve_seeds(
                store,
                body.graph_ref,
                body.algorithm.name if body.algorithm else None,
                body.algorithm.k if body.algorithm else None,
                body.seeds,
                algorithm_rng_seed=body.algorithm.rng_seed if body.algorithm else 0,
            )
            record = store.create_run(
                graph_ref=body.graph_ref,
                seeds=seeds,
                model=body.model.build(),
                r=body.r,
                master_seed=body.master_seed,
                m=body.m,
                layout_iterations=body.layout_iterations,
                layout_seed=body.layout_seed,
            )
        except USER_ERRORS as exc:
            raise _user_error(exc)
        if record.status != "done":
            _submit(record.run_id, lambda progress: store.execute_run(record, workers=workers, progress=progress))
        return {"run_id": record.run_id, "status": record.status}

    @app.get("/runs")
    def get_runs():
        return [dict(r.to_json(), status=r.status) for r in store.list_runs()]

    @app.get("/runs/{run_id}")
    def get_run(run_id: str):
        try:
            r = store.load_run(run_id)
        except USER_ERRORS as exc:
            raise _user_error(exc)
        return dict(r.to_json(), status=r.status)

    @app.get("/runs/{run_id}/matrices")
    def get_matrices(run_id: str, step: int, m: int | None = None, mode: str = "cumulative-active"):
        try:
            return pipeline.matrices_payload(store, run_id, step, m, mode)
        except USER_ERRORS as exc:
            raise _user_error(exc)

    @app.get("/runs/{run_id}/detail")
    def get_detail(run_id: str, row0: int, col0: int, row1: int, col1: int, step: int, m: int | None = None):
        try:
            return pipeline.detail_payload(store, run_id, (row0, col0, row1, col1), step, m)
        except USER_ERRORS as exc:
            raise _user_error(exc)

    @app.get("/runs/{run_id}/suggestion")
    def get_suggestion(run_id: str, n: int = 20):
        try:
            return pipeline.suggestion_payload(pipeline.suggestion_for_run(store, run_id, n))
        except USER_ERRORS as exc:
            raise _user_error(exc)

    @app.post("/runs/{run_id}/modified", status_code=202)
    def post_modified(run_id: str, body: ModifiedIn):
        if not body.accepted_removals and not body.accepted_promotions:
            raise HTTPException(status_code=400, detail="empty acceptance creates no run")
        try:
            parent = store.load_run(run_id)
            suggestion = pipeline.suggestion_for_run(store, run_id, body.n)
            from .advisor import apply_modification

            new_seeds = apply_modification(
                parent.seeds, suggestion, body.accepted_removals, body.accepted_promotions
            )
            record = store.create_run(
                graph_ref=parent.graph_ref,
                seeds=new_seeds,
                model=parent.model,
                r=parent.r,
                master_seed=parent.master_seed,
                m=parent.m,
                layout_iterations=parent.layout_iterations,
                layout_seed=parent.layout_seed,
                parent_run_id=parent.run_id,
            )
        except USER_ERRORS as exc:
            raise _user_error(exc)
        if record.status != "done":
            _submit(record.run_id, lambda progress: store.execute_run(record, workers=workers, progress=progress))
        return {"run_id": record.run_id, "status": record.status, "parent_run_id": run_id}

    @app.get("/compare")
    def get_compare(a: str, b: str):
        try:
            return pipeline.compare_payload(store, a, b)
        except USER_ERRORS as exc:
            raise _user_error(exc)

    @app.get("/runs/{run_id}/progress")
    def stream_progress(run_id: str):
        try:
            record = store.load_run(run_id)
        except USER_ERRORS as exc:
            raise _user_error(exc)
        with trackers_lock:
            tracker = trackers.get(run_id)

        def gen():
            if tracker is None:
                # subscribed after completion (or before any submission):
                # emit a single terminal event from the stored aggregation
                if record.status == "done":
                    agg = store.load_aggregation(run_id)
                    yield _sse({"completed": agg.runs, "total": agg.runs, "partial_spread_mean": agg.spread_mean})
                else:
                    yield _sse({"completed": 0, "total": record.r, "status": record.status})
                return
            i = 0
            while True:
                with tracker.cond:
                    while i >= len(tracker.events) and not tracker.done:
                        tracker.cond.wait(timeout=30)
                    events = tracker.events[i:]
                    done = tracker.done
                i += len(events)
                for e in events:
                    yield _sse(e)
                if done and i >= len(tracker.events):
                    return

        return StreamingResponse(gen(), media_type="text/event-stream")

    app.state.store = store
    return app


def _sse(event: dict) -> str:
    return f"data: {json.dumps(event)}\n\n"


def serve(config: Config) -> None:  # pragma: no cover - thin uvicorn wrapper
    import uvicorn

    uvicorn.run(create_app(config.data_dir, workers=config.workers), host="127.0.0.1", port=config.port)
