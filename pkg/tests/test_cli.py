import json
import subprocess
import sys
from pathlib import Path

import pytest

from granlogic.cli import main

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "golden, argv, code",
    [
        ("entail_neginf1.json", ["entail", "neginf1.gl", "!Sub(g3,g4)"], 0),
        ("entail_pdeductsat.json", ["entail", "pdeductsat.gl", "Disj(g1,g5)"], 0),
        ("entail_chain5.json", ["entail", "chain5.gl", "Sub(g1,g5)"], 0),
        ("sat_neginf2.json", ["sat", "neginf2.gl"], 1),
        ("sat_pdeductunsat.json", ["sat", "pdeductunsat.gl"], 1),
        ("classify_rcc5.json", ["classify", "rcc5.gl", "g1", "g3"], 0),
        ("model_sub12.txt", ["model", "sub12.gl"], 0),
        ("graph_chain5.dot", ["graph", "chain5.gl", "--dot"], 0),
    ],
)
def test_golden_outputs(capsys, golden, argv, code):
    argv = [argv[0], DATA / argv[1], *argv[2:]]
    got, out, _ = run(capsys, *argv)
    assert got == code
    assert out == (DATA / golden).read_text()


def test_entail_not_entailed(capsys):
    code, out, _ = run(capsys, "entail", DATA / "sub12.gl", "Sub(g2,g1)")
    assert code == 1
    d = json.loads(out)
    assert d["verdict"] == "not-entailed"
    assert d["countermodel"] == [[], ["g1", "g2"], ["g2"]]


def test_sat_verdict_and_proof_rule(capsys):
    code, out, _ = run(capsys, "sat", DATA / "neginf2.gl")
    d = json.loads(out)
    assert code == 1 and d["verdict"] == "unsat" and d["proof"]["rule"] == "C2"
    code, out, _ = run(capsys, "sat", DATA / "neginf1.gl")
    assert code == 0 and json.loads(out)["verdict"] == "sat"


@pytest.mark.parametrize("fmt, marker", [("text", "[I2-sa d"), ("dot", "digraph proof")])
def test_prove_formats(capsys, fmt, marker):
    code, out, _ = run(capsys, "entail", DATA / "neginf1.gl", "!Sub(g3,g4)", "--prove", fmt)
    assert code == 0
    assert marker in json.loads(out)["proof"]


def test_closure(capsys):
    code, out, _ = run(capsys, "closure", DATA / "chain5.gl")
    d = json.loads(out)
    assert code == 0 and d["verdict"] == "sat"
    assert "Sub(g1,g5)" in d["closure"] and "Sub(g5,g1)" not in d["closure"]
    code, out, _ = run(capsys, "closure", DATA / "neginf2.gl")
    assert json.loads(out)["verdict"] == "unsat"


def test_model_of_unsatisfiable_schema(capsys):
    code, out, err = run(capsys, "model", DATA / "pdeductunsat.gl")
    assert code == 1 and out == "" and "unsatisfiable" in err


def test_graph_out_file(capsys, tmp_path):
    target = tmp_path / "g.dot"
    code, out, _ = run(capsys, "graph", DATA / "chain5.gl", "--dot", "--out", target)
    assert code == 0 and out == ""
    assert target.read_text() == (DATA / "graph_chain5.dot").read_text()


@pytest.mark.parametrize(
    "argv",
    [
        ["entail", "missing.gl", "Sub(a,b)"],
        ["entail", "chain5.gl", "Sub(g1,nope)"],
        ["entail", "chain5.gl", "Sub(g1"],
        ["classify", "chain5.gl", "g1", "nope"],
        ["frobnicate"],
        [],
    ],
)
def test_errors_exit_2(capsys, argv):
    argv = [DATA / a if a.endswith(".gl") and a != "missing.gl" else a for a in argv]
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""


def test_parse_error_message(capsys, tmp_path):
    bad = tmp_path / "bad.gl"
    bad.write_text("granules g1;\nconstraints { Sub(g1,g2); }\n")
    code, _, err = run(capsys, "sat", bad)
    assert code == 2 and "parse error at 2:22" in err


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "granlogic", "classify", str(DATA / "rcc5.gl"), "g1", "g2"],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 0
    assert json.loads(r.stdout)["relations"] == ["PO"]
