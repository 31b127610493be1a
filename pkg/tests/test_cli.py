"""Command-line interface: reports, exit codes, round trips."""

import json

import pytest
from click.testing import CliRunner

from a2planar import pathalg as P
from a2planar.algebra import WebSum, mult
from a2planar.cli import main
from a2planar.graph import build_A, solve_cells
from a2planar.web import wgen_web


@pytest.fixture()
def runner():
    return CliRunner()


def run(runner, args, env=None):
    return runner.invoke(main, args, env=env)


def report(result):
    text = result.output
    start = text.index("{")
    return json.loads(text[start:])


def test_relcheck_hecke(runner):
    result = run(runner, ["relcheck", "--suite", "hecke", "--m", "4"])
    assert result.exit_code == 0
    doc = report(result)
    assert doc["suite"] == "relcheck:hecke"
    assert doc["checks"]
    assert all(c["status"] == "pass" for c in doc["checks"])
    assert {"id", "status", "residual", "runtime_ms"} <= set(doc["checks"][0])


def test_relcheck_markov_seeded(runner):
    a = run(runner, ["relcheck", "--suite", "markov", "--m", "3",
                     "--seed", "1", "--trials", "5"])
    b = run(runner, ["relcheck", "--suite", "markov", "--m", "3",
                     "--seed", "1", "--trials", "5"])
    assert a.exit_code == b.exit_code == 0
    assert [c["id"] for c in report(a)["checks"]] == [
        c["id"] for c in report(b)["checks"]]


def test_gram_rank(runner):
    result = run(runner, ["gram", "--sigma", "-,-,-,+,+,+", "--n", "5", "--rank"])
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == "5"
    result = run(runner, ["gram", "--sigma", "---+++", "--n", "7", "--rank"])
    assert result.output.splitlines()[0] == "6"


def test_quotient_dim(runner):
    result = run(runner, ["quotient-dim", "--sigma", "---+++", "--n", "5"])
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == "5"


def test_dims(runner):
    result = run(runner, ["dims", "--n", "5", "--i", "1", "--j", "2"])
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == "5"


def test_graph_build_a(runner):
    result = run(runner, ["graph", "build-a", "--n", "4"])
    assert result.exit_code == 0
    doc = report(result)
    assert len(doc["result"]["vertices"]) == 3
    assert doc["result"]["n"] == 4


def test_cells_solve(runner):
    result = run(runner, ["cells", "solve", "--n", "4"])
    assert result.exit_code == 0
    doc = report(result)
    assert doc["checks"][0]["residual"] < 1e-10
    assert doc["result"]["values"]


def test_connection_check(runner):
    result = run(runner, ["connection", "check", "--n", "5"])
    assert result.exit_code == 0
    doc = report(result)
    ids = {c["id"] for c in doc["checks"]}
    assert ids == {
        "unitarity_even", "unitarity_odd",
        "commuting_square_even", "commuting_square_odd",
    }
    assert all(c["residual"] < 1e-10 for c in doc["checks"])


def test_flat_check(runner):
    result = run(runner, ["flat", "check", "--n", "4", "--hmax", "2", "--vmax", "2"])
    assert result.exit_code == 0
    doc = report(result)
    assert doc["result"]["max_commutator"] < 1e-8


def test_normalize_round_trip(runner, tmp_path):
    x = WebSum.from_web(wgen_web("---", 0))
    xx = mult(x, x)  # reduces to [2] times the generator
    rows = [{"coeff": c.to_json(), "web": w.to_json()} for w, c in xx.terms.items()]
    f = tmp_path / "sum.json"
    f.write_text(json.dumps(rows))
    result = run(runner, ["normalize", "--in", str(f)])
    assert result.exit_code == 0
    doc = report(result)
    assert len(doc["result"]) == 1
    assert doc["result"][0]["coeff"]["laurent"] == {"-3": "1/1", "3": "1/1"}


def test_trace_identity(runner, tmp_path):
    from a2planar.web import identity_web

    w = identity_web("-")
    f = tmp_path / "one.json"
    f.write_text(json.dumps(
        [{"coeff": {"laurent": {"0": "1/1"}}, "web": w.to_json()}]))
    result = run(runner, ["trace", "--in", str(f)])
    assert result.exit_code == 0
    doc = report(result)
    # trace of a single strand closes to a loop: the quantum 3
    assert doc["result"]["laurent"] == {"-6": "1/1", "0": "1/1", "6": "1/1"}


def test_decompose(runner, tmp_path):
    x = WebSum.from_web(wgen_web("---", 1))
    rows = [{"coeff": c.to_json(), "web": w.to_json()} for w, c in x.terms.items()]
    f = tmp_path / "w.json"
    f.write_text(json.dumps(rows))
    result = run(runner, ["decompose", "--in", str(f)])
    assert result.exit_code == 0
    assert report(result)["checks"][0]["status"] == "pass"


def test_zmap(runner, tmp_path):
    word = [list(t) for t in P.word_w(1, 2, 0)]
    f = tmp_path / "word.json"
    f.write_text(json.dumps(word))
    result = run(runner, ["zmap", "--strips", str(f), "--n", "5",
                          "--i", "1", "--j", "2"])
    assert result.exit_code == 0
    doc = report(result)
    g = build_A(5)
    z = P.PathAlgElement.from_json(g, (1, 2), doc["result"])
    cells = solve_cells(g)
    assert z.dist(P.make_U(g, cells, 1, 2, 0)) < 1e-10


def test_zmap_with_labels(runner, tmp_path):
    g = build_A(5)
    pairs = P.enumerate_pairs(g, 1, 1)
    x = P.PathAlgElement(g, (1, 1), {pairs[0]: 1.0 + 0.5j})
    (tmp_path / "word.json").write_text(
        json.dumps([list(t) for t in P.word_insert()]))
    (tmp_path / "labels.json").write_text(
        json.dumps([{"level": [1, 1], "terms": x.to_json()}]))
    result = run(runner, ["zmap", "--strips", str(tmp_path / "word.json"),
                          "--labels", str(tmp_path / "labels.json"),
                          "--n", "5", "--i", "1", "--j", "1"])
    assert result.exit_code == 0
    z = P.PathAlgElement.from_json(g, (1, 1), report(result)["result"])
    assert z.dist(x) < 1e-12


def test_precision_guard(runner):
    result = run(runner, ["dims", "--n", "4", "--i", "0", "--j", "0"],
                 env={"A2P_PRECISION": "128"})
    assert result.exit_code == 2


def test_usage_error(runner):
    result = run(runner, ["relcheck", "--suite", "bogus"])
    assert result.exit_code == 2


def test_missing_input(runner):
    result = run(runner, ["normalize", "--in", "/nonexistent/x.json"])
    assert result.exit_code == 2
