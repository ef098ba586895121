import json
import subprocess
import sys

import pytest

from mpcore.cli import main

from helpers import FIXTURES

EX1 = str(FIXTURES / "example1.game")
EX2 = str(FIXTURES / "example2.game")
EX2B = str(FIXTURES / "example2_balanced.game")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_payoff(capsys):
    code, out, _ = run(capsys, "payoff", "--game", EX1, "--profile", FIXTURES / "alternating.profile")
    assert code == 0
    assert "1/4,1/4" in out


def test_nonempty_example2(capsys):
    code, res = run_json(capsys, "nonempty", "--game", EX2)
    assert code == 1 and res["answer"] == "no"
    code, res = run_json(capsys, "nonempty", "--game", EX2B)
    assert code == 0 and res["witness"]["x"] == ["1/1", "1/1", "1/1"]


def test_dominated_witness(capsys):
    code, res = run_json(capsys, "dominated", "--game", EX2, "--state", "s", "--vector", "2,1,0")
    assert code == 0
    assert res["witness"]["coalition"] == ["2", "3"]


def test_membership_and_bendev(capsys):
    code, _, _ = run(capsys, "membership", "--game", EX1, "--profile", FIXTURES / "stuck.profile")
    assert code == 1
    code, _, _ = run(capsys, "bendev", "--game", EX1, "--profile", FIXTURES / "stuck.profile")
    assert code == 0
    code, _, _ = run(capsys, "membership", "--game", FIXTURES / "weak_dominance.game",
                     "--profile", FIXTURES / "both_left.profile")
    assert code == 0


def test_ecore_and_acore(capsys):
    code, res = run_json(capsys, "ecore", "--game", EX2B, "--spec", "true -> GF at_s")
    assert code == 0
    assert res["witness"]["lasso"] == {"stem": [], "cycle": ["s"]}
    code, _, _ = run(capsys, "ecore", "--game", EX2, "--spec", "true -> GF at_s")
    assert code == 1
    code, _, _ = run(capsys, "acore", "--game", EX2, "--spec", "true -> GF at_s")
    assert code == 0


def test_values(capsys):
    code, _, _ = run(capsys, "values", "--game", EX2, "--coalition", "2,3", "--state", "s", "--point", "2,1")
    assert code == 0
    code, _, _ = run(capsys, "values", "--game", EX2, "--coalition", "2,3", "--state", "s", "--point", "5/2,1")
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["payoff", "--game", "/nonexistent.game", "--profile", "x"],
    ["dominated", "--game", EX2, "--state", "nowhere", "--vector", "0,0,0"],
    ["dominated", "--game", EX2, "--state", "s", "--vector", "1,2"],
    ["dominated", "--game", EX2, "--state", "s", "--vector", "a,b,c"],
    ["ecore", "--game", EX2, "--spec", "GF ->"],
    ["frobnicate"],
])
def test_bad_input_exits_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_resource_error_exits_3(capsys):
    code, _, err = run(capsys, "nonempty", "--game", EX2, "--max-search-nodes", "1")
    assert code == 3
    assert "budget" in err


def test_output_is_deterministic(capsys):
    argv = ["dominated", "--game", EX2, "--state", "s", "--vector", "2,1,0", "--json"]
    outs = {run(capsys, *argv)[1] for _ in range(3)}
    assert len(outs) == 1


def test_verify_round_trip(capsys, tmp_path):
    cases = [
        ["dominated", "--game", EX2, "--state", "s", "--vector", "2,1,0"],
        ["nonempty", "--game", EX2B],
        ["nonempty", "--game", EX2B, "--method", "region"],
        ["ecore", "--game", EX2B, "--spec", "true -> GF at_s"],
        ["membership", "--game", FIXTURES / "weak_dominance.game", "--profile", FIXTURES / "both_left.profile"],
        ["bendev", "--game", EX1, "--profile", FIXTURES / "stuck.profile"],
        ["payoff", "--game", EX1, "--profile", FIXTURES / "alternating.profile"],
    ]
    for i, argv in enumerate(cases):
        code, out, _ = run(capsys, *argv, "--json")
        path = tmp_path / f"r{i}.json"
        path.write_text(out)
        for extra in ([], ["--paranoid"]):
            code, res = run_json(capsys, "verify", "--result", path, *extra)
            assert code == 0, (argv, extra, res)


def test_verify_rejects_a_forged_witness(capsys, tmp_path):
    code, out, _ = run(capsys, "dominated", "--game", EX2, "--state", "s", "--vector", "2,1,0", "--json")
    res = json.loads(out)
    res["witness"]["z"] = ["3", "1"]
    path = tmp_path / "forged.json"
    path.write_text(json.dumps(res))
    code, _, _ = run(capsys, "verify", "--result", path)
    assert code == 1


@pytest.mark.parametrize("kind, src, expected", [
    ("qsat2", "qsat2_example.qbf", "yes"),
    ("qsat3", "qsat3_example.qbf", "yes"),
    ("dfa", "dfa_even_odd.dfa", "yes"),
])
def test_gen(capsys, tmp_path, kind, src, expected):
    code, res = run_json(capsys, "gen", kind, "--input", FIXTURES / src, "--out", tmp_path)
    assert code == 0
    side = json.loads((tmp_path / "expected.json").read_text())
    assert side["expected"] == expected
    if kind == "dfa":
        code, _, _ = run(capsys, "bendev", "--game", side["game"], "--profile", side["profile"])
    elif kind == "qsat2":
        code, _, _ = run(capsys, "dominated", "--game", side["game"], "--state", side["state"],
                         "--vector=" + ",".join(side["vector"]))
    else:
        code, _, _ = run(capsys, "nonempty", "--game", side["game"])
    assert code == (0 if expected == "yes" else 1)


def test_gen_rejects_wrong_kind(capsys, tmp_path):
    code, _, _ = run(capsys, "gen", "qsat3", "--input", FIXTURES / "qsat2_example.qbf", "--out", tmp_path)
    assert code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "mpcore", "payoff", "--game", EX1,
                        "--profile", str(FIXTURES / "alternating.profile")], capture_output=True, text=True)
    assert r.returncode == 0
    assert "1/4,1/4" in r.stdout
