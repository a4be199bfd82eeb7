import json
import subprocess
import sys

import pytest

from gradlie import cli
from gradlie.cli import construct_algebra, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def sh(cmd, stdin=None):
    return subprocess.run(cmd, shell=True, input=stdin, capture_output=True, text=True)


@pytest.fixture
def w21(tmp_path, capsys):
    path = tmp_path / "w.json"
    assert main(["construct", "W:2:1,1", "--out", str(path)]) == 0
    return path


# ---------------------------------------------------------------------------
# construct


@pytest.mark.parametrize(
    "family,dim",
    [
        ("classical:A:2:simple:1", 8),
        ("classical:A:4:psl:2", 23),
        ("classical:G:2:simple:1", 14),
        ("W:1:2", 25),
        ("W:2:1", 50),
        ("S1:3:1,1,1", 248),
        ("H2:2:1,1", 23),
        ("K1:3:1", 125),
        ("melikyan:1:1", 125),
    ],
)
def test_construct_families(family, dim):
    assert construct_algebra(family, 5).dim == dim


@pytest.mark.parametrize("family", ["nope", "classical:A:2", "W:x:1", "classical:A:2:simple:9", "W:2:1,1,1"])
def test_construct_usage_errors(capsys, family):
    code, _, err = run(capsys, "construct", family)
    assert code == cli.EXIT_USAGE and err


def test_construct_cap(capsys):
    code, _, err = run(capsys, "construct", "W:3:1", "--cap", "100")
    assert code == cli.EXIT_CAP and "cap" in err


def test_construct_reverse(capsys):
    _, out, _ = run(capsys, "construct", "W:1:1", "--reverse-grading")
    degs = json.loads(out)["grading"]
    assert (min(degs), max(degs)) == (-3, 1)


# ---------------------------------------------------------------------------
# analysis commands


def test_verify_ok(capsys, w21):
    code, out, _ = run(capsys, "verify", str(w21))
    rep = json.loads(out)
    assert code == 0 and rep["transitive"] and rep["hypotheses"]["ok"]
    assert rep["dims"] == [2, 4, 6, 8, 10, 8, 6, 4, 2]


def test_verify_axiom_failure(capsys, tmp_path):
    bad = {
        "format_version": "gradlie/1", "p": 5, "dim": 3, "labels": ["e", "h", "f"], "grading": [1, 0, -1],
        "table": [[0, 1, [[0, 3]]], [0, 2, [[1, 1]]], [1, 2, [[2, 1]]]],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == cli.EXIT_AXIOM and json.loads(out)["jacobi_violations"]


def test_parse_error_exit(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"format_version": "gradlie/1"}')
    code, _, err = run(capsys, "radical", str(path))
    assert code == cli.EXIT_PARSE and "missing keys" in err


def test_radical_and_minimal_ideal(capsys, w21):
    code, out, _ = run(capsys, "radical", str(w21))
    assert code == 0 and json.loads(out)["dim"] == 0
    code, out, _ = run(capsys, "minimal-ideal", str(w21))
    assert code == 0 and json.loads(out)["dim"] == 50


def test_decompose(capsys, w21):
    code, out, _ = run(capsys, "decompose", str(w21), "--degree", "1")
    rep = json.loads(out)
    assert code == 0 and rep["dim"] == 6 and rep["g0_ideals"] == ["gl2"]
    assert sorted(rep["composition_factor_dims"]) == [2, 4]
    assert sum(w["dim"] for w in rep["weights"]) == 6


def test_recognize(capsys, w21):
    code, out, _ = run(capsys, "recognize", str(w21), "--cap", "256")
    assert code == 0 and out.strip() == "W(2;(1,1)) natural"


def test_recognize_hypotheses_fail(capsys, tmp_path):
    path = tmp_path / "r.json"
    main(["construct", "W:2:1", "--reverse-grading", "--out", str(path)])
    code, _, err = run(capsys, "recognize", str(path), "--cap", "256")
    assert code == cli.EXIT_HYPOTHESES and "b" in err


def test_recognize_beyond_cap(capsys, tmp_path):
    path = tmp_path / "w3.json"
    main(["construct", "W:3:1", "--out", str(path)])
    code, _, err = run(capsys, "recognize", str(path), "--cap", "256")
    assert code == cli.EXIT_CAP and "bracket_kind" in err


def test_catalog_collisions(capsys):
    code, out, _ = run(capsys, "catalog", "--cap", "256", "--collisions")
    rep = json.loads(out)
    assert code == 0 and rep["collisions"] == [] and len(rep["entries"]) == 61 and len(rep["excluded"]) == 3


def test_no_command_and_bad_option(capsys):
    assert run(capsys)[0] == cli.EXIT_USAGE
    assert run(capsys, "verify")[0] == cli.EXIT_USAGE
    assert run(capsys, "catalog", "--threads", "0")[0] == cli.EXIT_USAGE


# ---------------------------------------------------------------------------
# subprocess pipelines


def test_pipe_construct_verify():
    exe = f"{sys.executable} -m gradlie"
    r = sh(f"{exe} construct W:2:1,1 | {exe} verify -")
    assert r.returncode == 0, r.stderr
    assert json.loads(r.stdout)["hypotheses"]["ok"]


def test_pipe_melikyan_recognize():
    exe = f"{sys.executable} -m gradlie"
    r = sh(f"{exe} construct melikyan:1:1 | {exe} recognize - --cap 256")
    assert r.returncode == 0, r.stderr
    assert r.stdout.strip() == "Melikyan (2;(1,1)) natural"


def test_seed_determinism():
    exe = f"{sys.executable} -m gradlie"
    doc = sh(f"{exe} construct H2:2:1").stdout
    a = sh(f"{exe} decompose - --degree 2 --seed 3", doc)
    b = sh(f"{exe} decompose - --degree 2 --seed 3", doc)
    assert a.returncode == 0 and a.stdout == b.stdout
