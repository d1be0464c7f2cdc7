from __future__ import annotations

import io
import json

import pytest

from nodaltails import __version__
from nodaltails.cli import run_command
from nodaltails.graph_io import serialize_graph


@pytest.fixture
def files(tmp_path, g0, gban, g1, g6):
    paths = {}
    for name, g in (("g0", g0), ("gban", gban), ("g1", g1), ("g6", g6)):
        p = tmp_path / f"{name}.json"
        p.write_bytes(serialize_graph(g))
        paths[name] = str(p)
    return paths


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run(*argv, "--json")
    return code, json.loads(out)


def test_tails_k3(files):
    code, out, _ = run("tails", "--graph", files["g1"], "--k", "3")
    assert code == 0
    assert "{2,4}" in out and "{3,4}" in out
    code, rep = run_json("tails", "--graph", files["g1"], "--k", "3")
    sets = [r["subcurve"] for r in rep["tails"]]
    assert [2, 4] in sets and [3, 4] in sets
    assert all(r["k"] == 3 for r in rep["tails"])


def test_abel_neron_json(files):
    code, rep = run_json("abel-neron", "--graph", files["g1"], "--i", "4", "--j", "4")
    assert code == 0
    assert rep["tool"] == "nodaltails" and rep["version"] == __version__ and rep["command"] == "abel-neron"
    res = rep["results"]
    assert res["coefficients"] == [0, 0, 0, 1]
    assert res["multidegree"] == [2, -1, -1, 0]
    assert res["quasistable"] is True and res["reduced_quasistable"] is True


def test_abel_neron_all_pairs(files):
    code, rep = run_json("abel-neron", "--graph", files["g6"], "--all-pairs")
    assert code == 0 and rep["all_quasistable"]
    assert len(rep["results"]) == 36
    entry = next(e for e in rep["results"] if e["pair"] == [4, 4])
    assert entry["multidegree"] == [1, -2, 1, 0, 0, 0]


def test_check_failure_exit_code(files):
    code, out, _ = run("check", "--graph", files["g0"], "--multidegree", "1,-1")
    assert code == 1 and "witness {1}" in out
    code, rep = run_json("check", "--graph", files["g0"], "--multidegree", "1,-1")
    assert code == 1 and rep["quasistable"] is False and rep["witness"] == [1]
    assert run("check", "--graph", files["g1"], "--multidegree", "2,-1,-1,0")[0] == 0


def test_base_override_relabels(files):
    code, rep = run_json("enumerate-quasistable", "--graph", files["gban"])
    assert rep["multidegrees"] == [[0, 0], [1, -1]]
    code, rep = run_json("enumerate-quasistable", "--graph", files["gban"], "--base", "2")
    assert rep["base"] == 2 and rep["multidegrees"] == [[-1, 1], [0, 0]]
    assert run("check", "--graph", files["gban"], "--multidegree=-1,1", "--base", "2")[0] == 0
    assert run("check", "--graph", files["gban"], "--multidegree=-1,1")[0] == 1
    code, rep = run_json("neron-check", "--graph", files["g1"], "--base", "3")
    assert code == 0 and rep["quasistable_count"] == rep["spanning_trees"] == 12


def test_nested_tails_and_twist(files):
    code, rep = run_json("nested-tails", "--graph", files["g6"], "--i", "4", "--j", "4")
    assert code == 0
    assert rep["tails"]["t2"] == [[4], [4, 5]] and rep["tails"]["t3"] == [[3, 4, 5, 6]]
    code, rep = run_json("twist", "--graph", files["g0"], "--subcurve", "2")
    assert rep["multidegree"] == [-1, 1]
    code, rep = run_json("twist", "--graph", files["g6"], "--i", "4", "--j", "4")
    assert rep["coefficients"] == [0, 0, 1, 3, 2, 1]


def test_enumerate_window(files):
    _, wide = run_json("enumerate-quasistable", "--graph", files["g1"], "--window", "4")
    _, box = run_json("enumerate-quasistable", "--graph", files["g1"])
    assert wide["multidegrees"] == box["multidegrees"] and box["count"] == 12


def test_verify_random_and_single(files):
    code, rep = run_json("verify", "--trials", "5", "--seed", "3", "--p-max", "5")
    assert code == 0 and rep["suite"]["counterexamples"] == 0
    assert rep["params"] == {"p_range": [2, 5], "extra_edges": [0, 6], "loop_probability": "1/10", "master_seed": 3}
    code, rep = run_json("verify", "--graph", files["g1"])
    assert code == 0 and rep["params"] is None and rep["suite"]["trials"] == 1


def test_json_reports_are_stable(files):
    a = run("abel-neron", "--graph", files["g6"], "--all-pairs", "--json")[1]
    b = run("abel-neron", "--graph", files["g6"], "--all-pairs", "--json")[1]
    assert a == b
    a = run("verify", "--trials", "3", "--json")[1]
    assert a == run("verify", "--trials", "3", "--json")[1]


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "--graph", "MISSING", "--multidegree", "0,0"],
        ["check", "--graph", "G0", "--multidegree", "0"],
        ["check", "--graph", "G0", "--multidegree", "a,b"],
        ["abel-neron", "--graph", "G0", "--i", "3", "--j", "1"],
        ["abel-neron", "--graph", "G0"],
        ["tails", "--graph", "G0", "--base", "5"],
        ["verify", "--p-min", "0"],
        ["verify", "--loops", "2"],
        ["bogus"],
    ],
)
def test_usage_errors_exit_2(files, argv):
    argv = [files["g0"] if a == "G0" else a for a in argv]
    assert run(*argv)[0] == 2


def test_bad_document_exit_2(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"components":3,"edges":[[1,2]]}')
    code, _, err = run("tails", "--graph", str(p))
    assert code == 2 and "Disconnected" in err


def test_guard_exit_2(tmp_path, monkeypatch):
    monkeypatch.setenv("NODALTAILS_MAX_COMPONENTS", "3")
    p = tmp_path / "path.json"
    p.write_text('{"components":4,"edges":[[1,2],[2,3],[3,4]]}')
    assert run("tails", "--graph", str(p))[0] == 2
