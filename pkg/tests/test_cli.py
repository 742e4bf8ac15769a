import json

import pytest
from click.testing import CliRunner

from totalcolor.cli import explain_text, main
from totalcolor.generators import random_dense_graph
from totalcolor.graph import Graph
from totalcolor.io import emit_edgelist, emit_graph6
from totalcolor.solve import solve


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def dense_file(tmp_path):
    p = tmp_path / "g.g6"
    p.write_bytes(emit_graph6(random_dense_graph(60, seed=1)) + b"\n")
    return p


def test_color_writes_report_and_coloring(runner, dense_file, tmp_path):
    out = tmp_path / "c.json"
    res = runner.invoke(main, ["color", "-i", str(dense_file), "--out", str(out), "--explain"])
    assert res.exit_code == 0, res.output
    payload = json.loads(out.read_text())
    assert payload["report"]["status"] == "ok"
    assert payload["coloring"]["vertices"]
    assert "route=" in res.stderr


def test_color_then_verify(runner, dense_file, tmp_path):
    out = tmp_path / "c.json"
    runner.invoke(main, ["color", "-i", str(dense_file), "--out", str(out)])
    res = runner.invoke(main, ["verify", "-i", str(dense_file), "--coloring", str(out)])
    assert res.exit_code == 0
    assert json.loads(res.stdout) == {"kind": "total", "ok": True, "violations": []}


def test_verify_reports_violation_with_exit_2(runner, tmp_path):
    g = tmp_path / "k3.g6"
    g.write_bytes(b"Bw\n")
    col = tmp_path / "bad.json"
    col.write_text(json.dumps({"k": 3, "vertices": [[0, 1], [1, 1], [2, 2]],
                               "edges": [[0, 1, 0, 3], [0, 2, 0, 2], [1, 2, 0, 3]]}))
    res = runner.invoke(main, ["verify", "-i", str(g), "--coloring", str(col)])
    assert res.exit_code == 2
    verdict = json.loads(res.stdout)
    assert verdict["violations"][0]["clause"] == "vertex-vertex"


def test_verify_good_coloring_payload(runner, tmp_path):
    g = tmp_path / "p3.txt"
    g.write_bytes(emit_edgelist(Graph.path(3)))
    col = tmp_path / "good.json"
    col.write_text(json.dumps({"M": [[0, 2]], "edges": [[0, 1, 0, 1], [1, 2, 0, 2], [0, 2, 0, 3], [1, 3, 0, 4]]}))
    res = runner.invoke(main, ["verify", "-i", str(g), "--format", "edgelist", "--coloring", str(col)])
    assert res.exit_code == 0
    assert json.loads(res.stdout)["kind"] == "good"


def test_verify_schema_error_exit_3(runner, tmp_path):
    g = tmp_path / "k3.g6"
    g.write_bytes(b"Bw\n")
    col = tmp_path / "junk.json"
    col.write_text(json.dumps({"colors": []}))
    res = runner.invoke(main, ["verify", "-i", str(g), "--coloring", str(col)])
    assert res.exit_code == 3


def test_bad_graph_input_exit_3(runner, tmp_path):
    p = tmp_path / "bad.g6"
    p.write_bytes(b"B\x01\n")
    res = runner.invoke(main, ["color", "-i", str(p)])
    assert res.exit_code == 3
    assert "offset" in res.stderr or "byte" in res.stderr


def test_strict_hypothesis_error_exit_3(runner, tmp_path):
    p = tmp_path / "k4.g6"
    p.write_bytes(emit_graph6(Graph.complete(4)))
    res = runner.invoke(main, ["color", "-i", str(p), "--mode", "strict"])
    assert res.exit_code == 3
    assert json.loads(res.stdout)["report"]["status"] == "hypothesis-error"


def test_stdin_input_and_trace(runner):
    data = emit_graph6(random_dense_graph(60, seed=2))
    res = runner.invoke(main, ["color", "-i", "-", "--trace"], input=data)
    assert res.exit_code == 0
    payload = json.loads(res.stdout)
    assert isinstance(payload["trace"], list) and payload["trace"]


def test_bad_epsilon(runner, dense_file):
    res = runner.invoke(main, ["color", "-i", str(dense_file), "--epsilon", "abc"])
    assert res.exit_code == 2  # click usage error


def test_oracle_and_cache(runner, tmp_path):
    p = tmp_path / "c5.g6"
    p.write_bytes(emit_graph6(Graph.cycle(5)))
    cache = tmp_path / "cache.json"
    for what, want in (("total-chromatic", 4), ("chromatic-index", 3), ("matching", 2)):
        res = runner.invoke(main, ["oracle", "-i", str(p), "--what", what, "--cache", str(cache)])
        assert res.exit_code == 0
        assert json.loads(res.stdout)[what] == want
    stored = json.loads(cache.read_text())
    assert stored[emit_graph6(Graph.cycle(5)).decode()] == {"total-chromatic": 4, "chromatic-index": 3,
                                                           "matching": 2}


def test_oracle_size_guard(runner, tmp_path):
    p = tmp_path / "big.g6"
    p.write_bytes(emit_graph6(Graph.cycle(12)))
    res = runner.invoke(main, ["oracle", "-i", str(p)])
    assert res.exit_code == 3


def test_bench_command(runner):
    res = runner.invoke(main, ["bench", "--n", "60", "--trials", "2", "--seed", "1"])
    assert res.exit_code == 0
    report = json.loads(res.stdout)
    assert report["summary"][0]["trials"] == 2
    assert report["summary"][0]["invalid_emissions"] == 0
    assert "pipeline" in res.stderr


def test_explain_text_mentions_route():
    text = explain_text(solve(Graph.complete(4)).report)
    assert "route=fallback" in text and "classification" not in text.split("\n")[0]
