import csv
import io
import json
import subprocess
import sys

import pytest

from nbcentrality.cli import main
from nbcentrality.experiments import SweepRecord
from nbcentrality.graph import read_edge_list


@pytest.fixture
def hub_file(tmp_path):
    path = tmp_path / "hub.txt"
    assert main(["generate", "er-hub", "--nodes", "2001", "--mean-degree", "4", "--hub-degree", "40",
                 "--seed", "3", "--out", str(path)]) == 0
    return path


def test_generate_deterministic(tmp_path, hub_file):
    again = tmp_path / "again.txt"
    main(["generate", "er-hub", "--nodes", "2001", "--mean-degree", "4", "--hub-degree", "40",
          "--seed", "3", "--out", str(again)])
    assert hub_file.read_bytes() == again.read_bytes()
    g = read_edge_list(hub_file)
    assert g.m > 3000


def test_generate_powerlaw(tmp_path):
    path = tmp_path / "pl.txt"
    assert main(["generate", "powerlaw", "--nodes", "1000", "--alpha", "2.5", "--out", str(path)]) == 0
    assert read_edge_list(path).m > 0


def test_generate_rejects_bad_alpha(tmp_path, capsys):
    assert main(["generate", "powerlaw", "--nodes", "100", "--alpha", "1.9", "--out", str(tmp_path / "x")]) == 2
    assert "exceed 2" in capsys.readouterr().err


def test_centrality_csv(hub_file, capsys):
    assert main(["centrality", "all", "--graph", str(hub_file), "--largest-component"]) == 0
    out = capsys.readouterr().out
    meta = [line for line in out.splitlines() if line.startswith("#")]
    assert any(line.startswith("# eigenvector_eigenvalue=") for line in meta)
    assert any(line.startswith("# graph_sha256=") for line in meta)
    rows = list(csv.DictReader(line for line in out.splitlines() if not line.startswith("#")))
    assert list(rows[0]) == ["node", "degree", "degree_centrality", "eigenvector", "nonbacktracking"]
    g = read_edge_list(hub_file)  # isolated nodes do not appear in an edge list
    assert len(rows) == g.n
    hub = max(rows, key=lambda r: int(r["degree"]))
    assert hub["node"] == "2000"


def test_centrality_json(hub_file, tmp_path):
    out = tmp_path / "c.json"
    assert main(["centrality", "eigenvector", "--graph", str(hub_file), "--largest-component",
                 "--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["metadata"]["eigenvector_converged"] is True
    assert doc["metadata"]["tol"] == 1e-8
    assert len(doc["nodes"]) == read_edge_list(hub_file).n


def test_disconnected_exit_code(tmp_path, capsys):
    path = tmp_path / "two.txt"
    path.write_text("a b\nb c\nc a\nx y\ny z\nz x\n")
    assert main(["centrality", "nonbacktracking", "--graph", str(path)]) == 2
    assert "--largest-component" in capsys.readouterr().err


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("1 2\n3\n")
    assert main(["centrality", "degree", "--graph", str(path)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_symmetrize_flag(tmp_path, capsys):
    path = tmp_path / "directed.txt"
    path.write_text("a b\nb a\nb c\nc a\na c\n")
    assert main(["centrality", "degree", "--graph", str(path), "--symmetrize", "mutual"]) == 0
    rows = [line for line in capsys.readouterr().out.splitlines() if not line.startswith("#")]
    degrees = {r.split(",")[0]: int(r.split(",")[1]) for r in rows[1:]}
    assert degrees == {"a": 2, "b": 1, "c": 1}


def test_missing_file(capsys):
    assert main(["centrality", "degree", "--graph", "/nonexistent/edges.txt"]) == 2


def test_ipr(hub_file, capsys):
    assert main(["ipr", "--graph", str(hub_file), "--largest-component", "--method", "eigenvector"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["hub_label"] == "2000" and report["converged"] is True
    assert 0.1 < report["ipr"] <= 1
    assert report["localized"] == (report["ipr"] > 10 / report["n"] ** 0.5)


def test_ipr_explicit_hub(hub_file, capsys):
    assert main(["ipr", "--graph", str(hub_file), "--largest-component", "--hub-node", "2000"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["hub_label"] == "2000" and report["group_means"]["n_neighbors"] > 20
    assert main(["ipr", "--graph", str(hub_file), "--hub-node", "nosuch"]) == 2


def test_sweep(tmp_path):
    out, summary = tmp_path / "s.csv", tmp_path / "sum.csv"
    args = ["sweep", "hub", "--mean-degree", "4", "--d-from", "10", "--d-to", "30", "--d-step", "10",
            "--nodes", "1500", "--seeds", "0,1", "--deterministic", "--out", str(out), "--summary", str(summary)]
    assert main(args) == 0
    lines = out.read_text().splitlines()
    assert lines[0].split(",") == SweepRecord.columns()
    assert len(lines) == 1 + 3 * 2
    first = out.read_bytes()
    assert main(args) == 0
    assert out.read_bytes() == first
    assert len(summary.read_text().splitlines()) == 4


def test_table(tmp_path, capsys):
    manifest = tmp_path / "m.json"
    manifest.write_text(json.dumps({"networks": [
        {"name": "hub", "generator": "er-hub", "params": {"n": 1001, "c": 4, "d": 40},
         "published": {"ev_ipr": 0.25}},
        {"name": "missing", "path": "gone.txt"},
    ]}))
    out = tmp_path / "t.csv"
    assert main(["table", "--manifest", str(manifest), "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "Nonbacktracking" in text and "not found" in text
    assert len(out.read_text().splitlines()) == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nbcentrality", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for sub in ("generate", "centrality", "ipr", "sweep", "table"):
        assert sub in proc.stdout


def test_stdin_graph(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("0 1\n1 2\n2 0\n"))
    assert main(["centrality", "eigenvector", "--graph", "-"]) == 0
    assert capsys.readouterr().out.count("\n") > 3
