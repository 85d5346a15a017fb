"""Regenerate the test fixtures from a live service instance.

Every JSON file under tests/fixtures/ is a verbatim HTTP response body,
so the dashboard tests assert against real API payloads.

Usage: python3 scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import tempfile
import time
from pathlib import Path

from fastapi.testclient import TestClient

from imlab.service import create_app

EDGES = "0 1\n1 2\n2 3\n3 0\n0 2\n1 3\n4 0\n4 1\n"
OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def wait_done(client, run_id):
    deadline = time.time() + 30
    while client.get(f"/runs/{run_id}").json()["status"] != "done":
        assert time.time() < deadline
        time.sleep(0.05)


def dump(name, payload):
    (OUT / name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        with TestClient(create_app(tmp, workers=1)) as client:
            ref = client.post(
                "/datasets",
                json={"name": "toy", "edge_list": EDGES,
                      "directedness": "undirected-as-bidirectional"},
            ).json()["graph_ref"]
            run_id = client.post(
                "/runs",
                json={
                    "graph_ref": ref,
                    "algorithm": {"name": "HIGHDEG", "k": 2},
                    "model": {"kind": "constant", "p": 0.4},
                    "r": 15,
                    "master_seed": 3,
                    "m": 3,
                    "layout_iterations": 30,
                },
            ).json()["run_id"]
            wait_done(client, run_id)

            record = client.get(f"/runs/{run_id}").json()
            dump("run.json", record)

            steps = client.get(f"/runs/{run_id}/matrices", params={"step": 0}).json()["num_steps"]
            for j in range(steps):
                dump(f"matrices_step{j}.json",
                     client.get(f"/runs/{run_id}/matrices", params={"step": j}).json())
                dump(f"matrices_step{j}_new.json",
                     client.get(f"/runs/{run_id}/matrices",
                                params={"step": j, "mode": "newly-active"}).json())

            dump("detail_full.json",
                 client.get(f"/runs/{run_id}/detail",
                            params={"row0": 0, "col0": 0, "row1": 2, "col1": 2, "step": 1}).json())

            suggestion = client.get(f"/runs/{run_id}/suggestion", params={"n": 20}).json()
            dump("suggestion.json", suggestion)

            child = client.post(
                f"/runs/{run_id}/modified",
                json={
                    "accepted_removals": [c["vertex"] for c in suggestion["removals"]],
                    "accepted_promotions": [c["vertex"] for c in suggestion["promotions"]],
                    "n": 20,
                },
            ).json()["run_id"]
            wait_done(client, child)
            dump("child_run.json", client.get(f"/runs/{child}").json())
            dump("child_matrices_step0.json",
                 client.get(f"/runs/{child}/matrices", params={"step": 0}).json())
            dump("compare.json",
                 client.get("/compare", params={"a": run_id, "b": child}).json())
            print(f"fixtures written to {OUT} (run {run_id}, child {child})")


if __name__ == "__main__":
    main()
