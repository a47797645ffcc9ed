import json
import shutil
import subprocess
from pathlib import Path

import pytest

from seplab.cli import EXIT_CAP, EXIT_INPUT, EXIT_OK, EXIT_VIOLATION, SCHEMA, main
from seplab.gadgets import anb2n, anbn, anbn_pa, anbnc, astar_pa
from seplab.semilinear import HyperlinearRep


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def run(argv, capsys):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


@pytest.fixture
def files(tmp_path):
    f = {
        "s1": HyperlinearRep(3, ((0, 0, 0),), ((1, 1, 0),)).to_json(),
        "s2": HyperlinearRep(3, ((0, 0, 1),), ((1, 2, 0),)).to_json(),
        "p1": HyperlinearRep(2, ((0, 0),), ((1, 1),)).to_json(),
        "p2": HyperlinearRep(2, ((0, 0),), ((1, 2),)).to_json(),
        "anbn": anbn().to_json(), "anb2n": anb2n().to_json(), "anbnc": anbnc().to_json(),
        "pa": anbn_pa().to_json(), "astar": astar_pa().to_json(),
        "diag": "vars x y. x = y\n", "box": "vars x y. x >= 3 /\\ y <= 1\n",
        "bad": "vars x y. x = = y\n", "exists": "vars x. exists t. x = 2*t\n",
    }
    return {k: write(tmp_path, k + (".txt" if isinstance(v, str) else ".json"), v) for k, v in f.items()}


def test_sep_semilinear_worked_example(files, capsys):
    code, rep = run(["sep-semilinear", "--lhs", files["s1"], "--rhs", files["s2"], "--oracle-check"], capsys)
    assert code == EXIT_OK and rep["separable"] is True and rep["schema"] == SCHEMA
    assert "certificate" not in rep and rep["oracle_check"]["violations"] == []
    assert len(rep["inputs"]["lhs"]["sha256"]) == 64


def test_certify_round_trip(files, capsys, tmp_path):
    out = str(tmp_path / "r.json")
    code = main(["sep-semilinear", "--lhs", files["p1"], "--rhs", files["p2"], "--output", out])
    rep = json.loads(Path(out).read_text())
    assert code == EXIT_OK and rep["separable"] is False and rep["certificate"]["kind"] == "hyperlinear"
    code, rep = run(["certify", "--report", out, "--lhs", files["p1"], "--rhs", files["p2"]], capsys)
    assert code == EXIT_OK and rep["verified"] is True
    bad = json.loads(Path(out).read_text())
    bad["certificate"]["point"][0] += 1
    out2 = write(tmp_path, "bad.json", bad)
    code, rep = run(["certify", "--report", out2, "--lhs", files["p1"], "--rhs", files["p2"]], capsys)
    assert code == EXIT_VIOLATION and rep["verified"] is False


def test_equal_sets_are_inseparable(files, capsys):
    code, rep = run(["sep-semilinear", "--lhs", files["p1"], "--rhs", files["p1"]], capsys)
    assert code == EXIT_OK and rep["separable"] is False


def test_mondec(files, capsys, tmp_path):
    out = str(tmp_path / "m.json")
    assert main(["mondec", "--formula", files["diag"], "--oracle-check", "--output", out]) == EXIT_OK
    rep = json.loads(Path(out).read_text())
    assert rep["decomposable"] is False and rep["oracle_check"]["simk_missing"] == []
    code, rep = run(["certify", "--report", out, "--lhs", files["diag"]], capsys)
    assert code == EXIT_OK and rep["verified"]
    code, rep = run(["mondec", "--formula", files["box"]], capsys)
    assert rep["decomposable"] is True


def test_input_errors(files, capsys):
    code, rep = run(["mondec", "--formula", files["bad"]], capsys)
    assert code == EXIT_INPUT and "line 1" in rep["error"]
    code, rep = run(["mondec", "--formula", files["exists"]], capsys)
    assert code == EXIT_INPUT and "FragmentError" in rep["error"]
    code, rep = run(["sep-semilinear", "--lhs", files["s1"], "--rhs", files["p1"]], capsys)
    assert code == EXIT_INPUT
    code, rep = run(["empty", "--zvass", files["diag"]], capsys)
    assert code == EXIT_INPUT


def test_sep_regular(files, capsys, tmp_path):
    out = str(tmp_path / "g.json")
    assert main(["sep-regular", "--a1", files["anbn"], "--a2", files["anb2n"], "--oracle-check",
                 "--output", out]) == EXIT_OK
    rep = json.loads(Path(out).read_text())
    assert rep["separable"] is False and rep["oracle_check"]["violations"] == []
    code, cert = run(["certify", "--report", out, "--lhs", files["anbn"], "--rhs", files["anb2n"]], capsys)
    assert code == EXIT_OK and cert["verified"]
    code, rep = run(["sep-regular", "--a1", files["anbn"], "--a2", files["anbnc"]], capsys)
    assert rep["separable"] is True


def test_regularity_and_threads(files, capsys, tmp_path):
    out = str(tmp_path / "p.json")
    assert main(["regularity", "--pa", files["pa"], "--threads", "2", "--output", out]) == EXIT_OK
    rep = json.loads(Path(out).read_text())
    assert rep["regular"] is False
    code, cert = run(["certify", "--report", out, "--lhs", files["pa"]], capsys)
    assert code == EXIT_OK and cert["verified"]
    code, rep = run(["regularity", "--pa", files["astar"]], capsys)
    assert rep["regular"] is True


def test_empty(files, capsys, tmp_path):
    code, rep = run(["empty", "--zvass", files["anbn"]], capsys)
    assert rep["empty"] is False and rep["witness"]["word"] == ["a", "b"]
    loop = {"dim": 1, "states": ["q"], "initial": "q", "final": "q",
            "transitions": [{"from": "q", "label": "a", "effect": [1], "to": "q"}]}
    code, rep = run(["empty", "--zvass", write(tmp_path, "l.json", loop)], capsys)
    assert rep["empty"] is False and rep["witness"]["run"] == []
    one = {"dim": 1, "states": ["i", "f"], "initial": "i", "final": "f",
           "transitions": [{"from": "i", "label": None, "effect": [1], "to": "f"}]}
    code, rep = run(["empty", "--zvass", write(tmp_path, "o.json", one), "--indices", "1"], capsys)
    assert rep["empty"] is True
    code, rep = run(["empty", "--zvass", write(tmp_path, "o.json", one), "--indices", ""], capsys)
    assert rep["empty"] is False


def test_exit_code_constants():
    assert (EXIT_OK, EXIT_INPUT, EXIT_VIOLATION, EXIT_CAP) == (0, 2, 3, 4)


@pytest.mark.skipif(shutil.which("seplab") is None, reason="console script not installed")
def test_console_script(files):
    out = subprocess.run(["seplab", "mondec", "--formula", files["box"]], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["decomposable"] is True
