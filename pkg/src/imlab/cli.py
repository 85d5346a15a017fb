"""Headless driver for the whole pipeline.

Subcommands: simulate, compare, suggest, export, serve. Exit codes:
0 success, 1 runtime failure, 2 usage error (including missing files).
All artifacts go through the same run-store code path as the service,
so identical inputs yield byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import pipeline
from .advisor import RunView, compare_runs
from .config import Config
from .graphs import ProbabilityModel
from .grid import density_matrix, diffusion_matrix
from .store import DEFAULT_GRID_M, DEFAULT_LAYOUT_ITERATIONS, RunStore

DEFAULTS = {
    "model": "weighted-cascade",
    "runs": 100,
    "master-seed": 0,
    "m": DEFAULT_GRID_M,
    "layout-iterations": DEFAULT_LAYOUT_ITERATIONS,
    "layout-seed": 0,
    "suggestion-count": 20,
    "workers": 1,
    "port": 8765,
}


def _model_from_args(args: argparse.Namespace) -> ProbabilityModel:
    if args.model == "weighted-cascade":
        return ProbabilityModel.weighted_cascade()
    if args.model == "constant":
        if args.p is None:
            raise SystemExit2("--p is required with --model constant")
        return ProbabilityModel.constant(args.p)
    if args.model == "trivalency":
        return ProbabilityModel.trivalency(rng_seed=args.trivalency_seed)
    raise SystemExit2(f"unknown model {args.model!r}")


class SystemExit2(Exception):
    """Usage error; exits with code 2."""


def _store_and_run(run_dir: str) -> tuple[RunStore, str]:
    p = Path(run_dir)
    if not (p / "record.json").is_file():
        raise SystemExit2(f"not a run directory (no record.json): {p}")
    return RunStore(p.parent.parent), p.name


def cmd_simulate(args: argparse.Namespace) -> int:
    graph_path = Path(args.graph)
    if not graph_path.is_file():
        raise SystemExit2(f"graph file not found: {graph_path}")
    store = RunStore(args.output_dir)
    ref = store.ingest_dataset_file(graph_path.stem, graph_path, args.directedness)
    seeds = pipeline.resolve_seeds(
        store,
        ref,
        args.algorithm,
        args.k,
        [int(s) for s in args.seed_list.split(",")] if args.seed_list else None,
        algorithm_rng_seed=args.algorithm_seed,
    )
    record = pipeline.execute_new_run(
        store,
        graph_ref=ref,
        seeds=seeds,
        model=_model_from_args(args),
        r=args.runs,
        master_seed=args.master_seed,
        m=args.m,
        layout_iterations=args.layout_iterations,
        layout_seed=args.layout_seed,
        workers=args.workers,
    )
    agg = store.load_aggregation(record.run_id)
    print(f"run {record.run_id}: seeds={len(seeds.seeds)} ({seeds.origin}) runs={args.runs}")
    print(f"spread mean = {agg.spread_mean:.3f} +- {agg.spread_std:.3f} over {agg.num_steps} steps")
    print(f"artifacts in {store.run_dir(record.run_id)}")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    store_a, run_a = _store_and_run(args.run_a)
    store_b, run_b = _store_and_run(args.run_b)
    view_a = RunView(
        graph_hash=store_a.load_run(run_a).graph_ref,
        grid=store_a.grid_for(store_a.load_run(run_a)),
        agg=store_a.load_aggregation(run_a),
    )
    view_b = RunView(
        graph_hash=store_b.load_run(run_b).graph_ref,
        grid=store_b.grid_for(store_b.load_run(run_b)),
        agg=store_b.load_aggregation(run_b),
    )
    report = compare_runs(view_a, view_b)
    report["run_a"], report["run_b"] = run_a, run_b
    delta, se = report["spread_delta"], report["spread_delta_se"]
    print(f"A: {report['spread_mean_a']:.3f} +- {report['spread_std_a']:.3f}")
    print(f"B: {report['spread_mean_b']:.3f} +- {report['spread_std_b']:.3f}")
    print(f"delta (B - A): {delta:+.3f} ({report['relative_spread_delta']:+.2%}), se {se:.3f}")
    if args.json_out:
        Path(args.json_out).write_text(json.dumps(report, indent=2) + "\n")
        print(f"report written to {args.json_out}")
    return 0


def cmd_suggest(args: argparse.Namespace) -> int:
    store, run_id = _store_and_run(args.run)
    suggestion = pipeline.suggestion_for_run(store, run_id, args.count)
    payload = pipeline.suggestion_payload(suggestion)
    print(json.dumps(payload, indent=2))
    if args.apply:
        record = pipeline.run_modified(
            store,
            run_id,
            suggestion.removal_ids(),
            suggestion.promotion_ids(),
            args.count,
            workers=args.workers,
        )
        report = pipeline.compare_payload(store, run_id, record.run_id)
        print(f"modified run {record.run_id} (parent {run_id})")
        print(
            f"spread delta: {report['spread_delta']:+.3f} "
            f"({report['relative_spread_delta']:+.2%}), se {report['spread_delta_se']:.3f}"
        )
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    store, run_id = _store_and_run(args.run)
    record = store.load_run(run_id)
    agg = store.load_aggregation(run_id)
    grid = store.grid_for(record, args.m)
    dens = density_matrix(grid)
    diff = diffusion_matrix(grid, agg, args.step, args.mode)
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.format == "csv":
        for name, mat in (("density", dens.counts), ("diffusion", diff.values)):
            path = outdir / f"{name}_m{grid.m}_step{args.step}.csv"
            with path.open("w") as fh:
                fh.write(",".join(f"c{c}" for c in range(grid.m)) + "\n")
                for row in mat:
                    fh.write(",".join(str(v) for v in row) + "\n")
            print(f"wrote {path}")
    else:
        path = outdir / f"matrices_m{grid.m}_step{args.step}.json"
        path.write_text(
            json.dumps(pipeline.matrices_payload(store, run_id, args.step, args.m, args.mode), indent=2)
            + "\n"
        )
        print(f"wrote {path}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:  # pragma: no cover - long-running
    from .service import serve

    cfg = Config.load(args.config) if args.config else Config.load()
    if args.data_dir:
        cfg.data_dir = args.data_dir
    if args.port:
        cfg.port = args.port
    serve(cfg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="imlab", description=__doc__)
    parser.add_argument("--show-config", action="store_true", help="print all defaults and exit")
    sub = parser.add_subparsers(dest="command")

    def add_workers(p):
        p.add_argument("--workers", type=int, default=1, help="parallel simulation workers")

    p = sub.add_parser("simulate", help="run one simulation and persist it")
    p.add_argument("--graph", required=True, help="edge-list file")
    p.add_argument("--directedness", default="undirected-as-bidirectional",
                   choices=["directed", "undirected-as-bidirectional"])
    p.add_argument("--algorithm", choices=["HIGHDEG", "SDISC", "RANDOM"])
    p.add_argument("--k", type=int)
    p.add_argument("--seed-list", help="comma-separated explicit seed ids (dense)")
    p.add_argument("--algorithm-seed", type=int, default=0)
    p.add_argument("--model", default="weighted-cascade",
                   choices=["weighted-cascade", "constant", "trivalency"])
    p.add_argument("--p", type=float, help="probability for --model constant")
    p.add_argument("--trivalency-seed", type=int, default=0)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--master-seed", type=int, default=0)
    p.add_argument("--m", type=int, default=DEFAULT_GRID_M)
    p.add_argument("--layout-iterations", type=int, default=DEFAULT_LAYOUT_ITERATIONS)
    p.add_argument("--layout-seed", type=int, default=0)
    p.add_argument("--output-dir", required=True, help="run-store root")
    add_workers(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="compare two completed runs")
    p.add_argument("run_a")
    p.add_argument("run_b")
    p.add_argument("--json-out", help="write the machine-readable report here")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("suggest", help="suggest seed removals/promotions for a run")
    p.add_argument("run")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--apply", action="store_true", help="accept everything and rerun")
    add_workers(p)
    p.set_defaults(func=cmd_suggest)

    p = sub.add_parser("export", help="export density/diffusion matrices")
    p.add_argument("run")
    p.add_argument("--step", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--mode", default="cumulative-active",
                   choices=["cumulative-active", "newly-active"])
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--output-dir", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--data-dir")
    p.add_argument("--port", type=int)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.show_config:
        print(json.dumps(DEFAULTS, indent=2))
        return 0
    if not getattr(args, "command", None):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
