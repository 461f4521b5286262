import json

import pytest

from makerbreaker.cli import main
from makerbreaker.graph import Graph, read_edge_list, write_edge_list
from makerbreaker.random_process import PairOrdering, prefix_graph


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sample_process_writes_order(tmp_path, capsys):
    out = tmp_path / "g.txt"
    code, _, _ = run(capsys, "sample", "--n", "12", "--M", "20", "--seed", "4", "--out", str(out))
    assert code == 0
    g = read_edge_list(out)
    side = json.loads((tmp_path / "g.txt.order.json").read_text())
    assert side["steps"] == 20 and g.m == 20
    pi = PairOrdering(12, side["order"])
    assert prefix_graph(pi, 20) == g


def test_sample_other_models(tmp_path, capsys):
    out = tmp_path / "g.txt"
    assert run(capsys, "sample", "--n", "9", "--model", "gnm", "--M", "7", "--out", str(out))[0] == 0
    assert read_edge_list(out).m == 7
    assert run(capsys, "sample", "--n", "9", "--model", "gnp", "--p", "1", "--out", str(out))[0] == 0
    assert read_edge_list(out) == Graph.complete(9)
    code, _, err = run(capsys, "sample", "--n", "9", "--model", "gnm", "--out", str(out))
    assert code == 2 and "--M" in err


@pytest.fixture
def c5(tmp_path):
    path = tmp_path / "c5.txt"
    write_edge_list(Graph.cycle(5), path)
    return str(path)


@pytest.mark.parametrize("extra,expected", [
    (["--property", "mindeg", "--k", "2"], True),
    (["--property", "mindeg", "--k", "3"], False),
    (["--property", "kconn", "--k", "2"], True),
    (["--property", "kedge", "--k", "3"], False),
    (["--property", "pm"], True),
    (["--property", "ham"], True),
    (["--property", "expander", "--R", "1", "--c", "2"], True),
    (["--property", "expander", "--R", "2", "--c", "2"], False),
])
def test_verify(c5, capsys, extra, expected):
    code, out, _ = run(capsys, "verify", "--in", c5, *extra)
    assert code == 0
    assert json.loads(out)["result"] is expected


def test_verify_certificates(tmp_path, capsys):
    path = tmp_path / "p.txt"
    write_edge_list(Graph.path(4), path)
    _, out, _ = run(capsys, "verify", "--in", str(path), "--property", "boosters")
    assert json.loads(out)["result"] == [[0, 3]]
    star = tmp_path / "s.txt"
    write_edge_list(Graph(4, [(0, 1), (0, 2), (0, 3)]), star)
    _, out, _ = run(capsys, "verify", "--in", str(star), "--property", "pm")
    res = json.loads(out)
    assert res["result"] is False and res["certificate"]["tutte_set"] == [0]
    code, _, err = run(capsys, "verify", "--in", str(star), "--property", "expander", "--R", "1")
    assert code == 2 and "--c" in err


def test_play(tmp_path, capsys):
    board = tmp_path / "k6.txt"
    write_edge_list(Graph.complete(6), board)
    out = tmp_path / "t.json"
    code, _, _ = run(capsys, "play", "--board", str(board), "--maker", "maker_min_degree_pairing",
                     "--breaker", "breaker_random", "--stop", "mindeg:1", "--seed", "2", "--out", str(out))
    assert code == 0
    tr = json.loads(out.read_text())
    assert tr["outcome"]["stopped"] and tr["outcome"]["stop"] == "mindeg:1"
    code, _, _ = run(capsys, "play", "--board", str(board), "--maker", "maker_random",
                     "--breaker", "breaker_random", "--maker-params", '{"nope": 1}')
    assert code == 2


def test_experiment(tmp_path, capsys):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"experiment": "hitting_time", "n": 40, "trials": 4}))
    code, out, _ = run(capsys, "experiment", "--config", str(conf), "--out-dir", str(tmp_path / "o"))
    assert code == 0 and json.loads(out)["trials"] == 4
    assert (tmp_path / "o" / "rows.csv").exists()
    conf.write_text(json.dumps({"experiment": "hitting_time", "n": 40, "trials": 0}))
    assert run(capsys, "experiment", "--config", str(conf))[0] == 2
