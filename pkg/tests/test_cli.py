import csv
import io
import json
import subprocess
import sys

import pytest

from fpaball import graph
from fpaball.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_size_plain(capsys):
    assert run(capsys, "size", "--lambda", "2", "--m", "4", "--d", "2") == (0, "786\n", "")
    code, out, _ = run(capsys, "size", "--lambda", "2", "--m", "1", "--d", "7")
    assert (code, out) == (0, "1\n")


def test_size_methods_agree(capsys):
    outs = set()
    for method in ("enum", "iterative", "permanent", "matrix-power", "auto"):
        code, out, _ = run(capsys, "size", "--lambda", "2", "--m", "4", "--d", "2", "--method", method)
        assert code == 0
        outs.add(out)
    assert outs == {"786\n"}


def test_size_json_and_csv(capsys):
    code, out, _ = run(capsys, "size", "--lambda", "5", "--m", "3", "--d", "2", "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert set(rec) == {"lambda", "m", "d", "n", "value", "method", "wall_time_ms"}
    assert rec["value"] == "756756" and rec["n"] == 15
    code, out, _ = run(capsys, "size", "--lambda", "2", "--m", "4", "--d", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["value"] == "786"
    assert list(rows[0]) == ["lambda", "m", "d", "n", "value", "method", "wall_time_ms"]


def test_size_exit_codes(capsys):
    assert run(capsys, "size", "--lambda", "2", "--m", "0", "--d", "1")[0] == 2
    assert run(capsys, "size", "--lambda", "x", "--m", "1", "--d", "1")[0] == 2
    assert run(capsys, "size", "--lambda", "2", "--m", "3", "--d", "2", "--state-width-limit", "4")[0] == 3
    assert run(capsys, "size", "--lambda", "2", "--m", "3", "--d", "2", "--method", "permanent",
               "--permanent-limit", "4")[0] == 3
    assert run(capsys, "size", "--lambda", "3", "--m", "4", "--d", "2", "--method", "matrix-power",
               "--memory-budget", "1000")[0] == 3


def test_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("FPABALL_STATE_WIDTH_LIMIT", "4")
    assert run(capsys, "size", "--lambda", "2", "--m", "3", "--d", "2")[0] == 3
    assert run(capsys, "size", "--lambda", "2", "--m", "3", "--d", "2", "--state-width-limit", "8")[0] == 0


def test_table(capsys, published):
    code, out, _ = run(capsys, "table", "--lambda", "2", "--d", "2", "--m-max", "20")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 20
    assert rows[-1]["value"] == "741681846818742097"
    assert [int(r["value"]) for r in rows] == [published[(2, m, 2)] for m in range(1, 21)]
    code, out, _ = run(capsys, "table", "--lambda", "1", "--d", "0", "--m-max", "5", "--format", "json")
    assert [r["value"] for r in json.loads(out)] == ["1"] * 5


def test_decimal_round_trip(capsys):
    code, out, _ = run(capsys, "table", "--lambda", "3", "--d", "3", "--m-max", "20", "--format", "json")
    for rec in json.loads(out):
        assert str(int(rec["value"])) == rec["value"]
        assert "e" not in rec["value"].lower()


def test_enum(capsys):
    assert run(capsys, "enum", "--lambda", "1", "--m", "2", "--d", "1") == (0, "1 2\n2 1\ncount: 2\n", "")
    code, out, _ = run(capsys, "enum", "--lambda", "2", "--m", "2", "--d", "2")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 7 and lines[-1] == "count: 6"


def test_enum_limit(capsys):
    code, out, err = run(capsys, "enum", "--lambda", "2", "--m", "3", "--d", "1", "--limit", "10")
    assert code == 3
    assert len(out.splitlines()) == 10
    assert "budget" in err


def test_graph(capsys):
    code, out, _ = run(capsys, "graph", "--lambda", "2", "--d", "1", "--view", "H", "--format", "dot")
    assert code == 0 and out.count("->") == 19 and out.count("[label=") == 6
    code, out, _ = run(capsys, "graph", "--lambda", "2", "--d", "1", "--m", "3", "--view", "G", "--format", "json")
    g = json.loads(out)
    assert code == 0 and len(g["nodes"]) == 24 and g["layers"] == 4
    assert run(capsys, "graph", "--lambda", "2", "--d", "1", "--format", "xml")[0] == 2
    assert run(capsys, "graph", "--lambda", "2", "--d", "1", "--view", "G")[0] == 2


def test_graph_json_golden(capsys):
    code, out, _ = run(capsys, "graph", "--lambda", "1", "--d", "1", "--format", "json")
    assert json.loads(out) == {
        "view": "H",
        "lambda": 1,
        "d": 1,
        "nodes": [{"id": 0, "members": [1]}, {"id": 1, "members": [0]}],
        "edges": [[0, 0], [0, 1], [1, 0]],
    }


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--lambda-max", "2", "--d-max", "2", "--m-max", "3")
    assert code == 0
    assert "MISMATCH" not in out
    assert out.strip().endswith("18 points, 0 mismatches")


def test_verify_reports_786(capsys):
    code, out, _ = run(capsys, "verify", "--lambda-max", "2", "--d-max", "2", "--m-max", "4")
    line = next(l for l in out.splitlines() if l.startswith("lambda=2 m=4 d=2"))
    assert code == 0
    assert line.count("=786") == 4


def test_verify_detects_corruption(capsys, monkeypatch):
    real = graph.build_adjacency

    def corrupted(lam, d, limits=None):
        a = real(lam, d) if limits is None else real(lam, d, limits)
        if a.shape[0] > 1:
            a[1, 0] = 1 - a[1, 0]
        return a

    monkeypatch.setattr(graph, "build_adjacency", corrupted)
    code, out, _ = run(capsys, "verify", "--lambda-max", "2", "--d-max", "1", "--m-max", "3")
    assert code == 4
    assert "MISMATCH" in out


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--lambda", "2", "--m", "4", "--d-code", "3", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["gv_lower"] == "4"
    code, out, _ = run(capsys, "bounds", "--lambda", "2", "--m", "4", "--d-code", "1", "--format", "json")
    rep = json.loads(out)
    assert rep["gv_lower"] == rep["sp_upper"] == "2520"
    code, out, _ = run(capsys, "bounds", "--lambda", "2", "--m", "4", "--d-code", "3")
    assert "gv_lower: 4" in out
    assert run(capsys, "bounds", "--lambda", "2", "--m", "4", "--d-code", "0")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fpaball", "size", "--lambda", "2", "--m", "4", "--d", "2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "786\n"
