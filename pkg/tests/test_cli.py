from __future__ import annotations

import json
import re
import time
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from imlab.cli import main
from imlab.service import create_app

EDGES = "0 1\n1 2\n2 3\n3 0\n0 2\n1 3\n4 0\n4 1\n"


@pytest.fixture
def edge_file(tmp_path):
    p = tmp_path / "toy.txt"
    p.write_text(EDGES)
    return p


def simulate(tmp_path, edge_file, capsys, *extra):
    out_dir = tmp_path / "store"
    code = main(
        [
            "simulate",
            "--graph", str(edge_file),
            "--algorithm", "HIGHDEG",
            "--k", "2",
            "--model", "constant",
            "--p", "0.4",
            "--runs", "15",
            "--master-seed", "3",
            "--m", "3",
            "--layout-iterations", "30",
            "--output-dir", str(out_dir),
            *extra,
        ]
    )
    captured = capsys.readouterr()
    assert code == 0, captured.err
    match = re.search(r"run (\w+):", captured.out)
    return out_dir, match.group(1), captured.out


class TestSimulate:
    def test_summary_and_artifacts(self, tmp_path, edge_file, capsys):
        out_dir, run_id, out = simulate(tmp_path, edge_file, capsys)
        assert "spread mean" in out
        run_dir = out_dir / "runs" / run_id
        assert (run_dir / "aggregation.json").exists()
        assert (run_dir / "record.json").exists()

    def test_explicit_seed_spread(self, tmp_path, capsys):
        p = tmp_path / "path3.txt"
        p.write_text("0 1\n1 2\n")
        code = main(
            [
                "simulate", "--graph", str(p), "--directedness", "directed",
                "--seed-list", "0", "--model", "constant", "--p", "0.5",
                "--runs", "10000", "--master-seed", "1", "--layout-iterations", "10",
                "--output-dir", str(tmp_path / "store"),
            ]
        )
        out = capsys.readouterr().out
        assert code == 0
        spread = float(re.search(r"spread mean = ([\d.]+)", out).group(1))
        assert 1.70 <= spread <= 1.80

    def test_missing_file_exit_2(self, tmp_path, capsys):
        code = main(
            [
                "simulate", "--graph", str(tmp_path / "absent.txt"),
                "--algorithm", "HIGHDEG", "--k", "1",
                "--output-dir", str(tmp_path / "store"),
            ]
        )
        assert code == 2
        assert "absent.txt" in capsys.readouterr().err

    def test_usage_error_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--bogus-flag"])
        assert exc.value.code == 2

    def test_show_config(self, capsys):
        assert main(["--show-config"]) == 0
        cfg = json.loads(capsys.readouterr().out)
        assert cfg["m"] == 10
        assert cfg["runs"] == 100


class TestCompare:
    def test_self_compare_zero_delta(self, tmp_path, edge_file, capsys):
        out_dir, run_id, _ = simulate(tmp_path, edge_file, capsys)
        run_dir = str(out_dir / "runs" / run_id)
        code = main(["compare", run_dir, run_dir, "--json-out", str(tmp_path / "r.json")])
        out = capsys.readouterr().out
        assert code == 0
        report = json.loads((tmp_path / "r.json").read_text())
        assert report["spread_delta"] == 0.0
        assert "+0.000" in out

    def test_mismatched_graphs_fail(self, tmp_path, edge_file, capsys):
        out_dir, run_id, _ = simulate(tmp_path, edge_file, capsys)
        other = tmp_path / "other.txt"
        other.write_text("0 1\n1 0\n2 0\n")
        code = main(
            [
                "simulate", "--graph", str(other), "--directedness", "directed",
                "--seed-list", "0", "--model", "constant", "--p", "0.5",
                "--runs", "5", "--layout-iterations", "10",
                "--output-dir", str(out_dir),
            ]
        )
        assert code == 0
        other_id = re.search(r"run (\w+):", capsys.readouterr().out).group(1)
        code = main(["compare", str(out_dir / "runs" / run_id), str(out_dir / "runs" / other_id)])
        assert code == 1
        assert "different graphs" in capsys.readouterr().err

    def test_not_a_run_dir(self, tmp_path, capsys):
        assert main(["compare", str(tmp_path), str(tmp_path)]) == 2


class TestSuggestExport:
    def test_suggest_and_apply(self, tmp_path, edge_file, capsys):
        out_dir, run_id, _ = simulate(tmp_path, edge_file, capsys)
        code = main(["suggest", str(out_dir / "runs" / run_id), "--count", "1", "--apply"])
        out = capsys.readouterr().out
        assert code == 0
        assert "modified run" in out
        assert "spread delta" in out

    def test_export_csv(self, tmp_path, edge_file, capsys):
        out_dir, run_id, _ = simulate(tmp_path, edge_file, capsys)
        dest = tmp_path / "export"
        code = main(
            ["export", str(out_dir / "runs" / run_id), "--step", "0", "--output-dir", str(dest)]
        )
        assert code == 0
        density = (dest / "density_m3_step0.csv").read_text().splitlines()
        assert density[0] == "c0,c1,c2"
        assert len(density) == 4
        total = sum(int(v) for row in density[1:] for v in row.split(","))
        assert total == 5

    def test_export_step_out_of_range(self, tmp_path, edge_file, capsys):
        out_dir, run_id, _ = simulate(tmp_path, edge_file, capsys)
        code = main(
            ["export", str(out_dir / "runs" / run_id), "--step", "999", "--output-dir", str(tmp_path / "x")]
        )
        assert code == 1


class TestCliServiceParity:
    def test_byte_identical_run_store_artifacts(self, tmp_path, edge_file, capsys):
        out_dir, run_id, _ = simulate(tmp_path, edge_file, capsys)

        app = create_app(str(tmp_path / "svc"), workers=2)
        with TestClient(app) as client:
            ref = client.post(
                "/datasets",
                json={"name": "toy", "edge_list": EDGES, "directedness": "undirected-as-bidirectional"},
            ).json()["graph_ref"]
            svc_run = client.post(
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
            deadline = time.time() + 30
            while client.get(f"/runs/{svc_run}").json()["status"] != "done":
                assert time.time() < deadline
                time.sleep(0.05)

        assert svc_run == run_id
        cli_dir = out_dir / "runs" / run_id
        svc_dir = tmp_path / "svc" / "runs" / run_id
        for f in sorted(cli_dir.iterdir()):
            if f.name == "meta.json":
                continue
            assert (svc_dir / f.name).read_bytes() == f.read_bytes(), f.name
