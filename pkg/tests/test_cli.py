from __future__ import annotations

import contextlib
import io
import json
import shutil
import subprocess
import sys
import tempfile

import pytest
from hypothesis import given, settings

from upsilon_cover import cli
from upsilon_cover import complex_core as cc
from upsilon_cover import concordance as co
from upsilon_cover import grid as gd
from upsilon_cover import oneone as oo
from upsilon_cover import upsilon as up

from .strategies import random_complex, seeds


def run(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_upsilon_torus_csv(tmp_path, capsys):
    out = tmp_path / "u.csv"
    code, _, _ = run(capsys, "upsilon", "--family", "torus", "--n", "2", "--out", str(out))
    assert code == 0
    assert out.read_text().splitlines() == ["t,value", "0/1,0/1", "1/1,-2/1", "2/1,0/1"]


def test_grid_check_differentials(capsys):
    code, out, _ = run(capsys, "grid", "--p", "5", "--check-differentials")
    assert code == 0 and "closed form only: 0" in out


def test_tau_grid(capsys):
    code, out, _ = run(capsys, "tau", "--grid-p", "7", "--spinc", "0,1,2,3")
    assert code == 0 and out.strip() == "3,2,1,0"


def test_parallel_matches_serial(capsys):
    _, serial, _ = run(capsys, "tau", "--grid-p", "5", "--spinc", "0,1,2,-1")
    code, par, _ = run(capsys, "--parallel", "tau", "--grid-p", "5", "--spinc", "0,1,2,-1")
    assert code == 0 and par == serial == "2,1,0,1\n"


def test_region_shorthand(capsys):
    code, out, _ = run(capsys, "upsilon", "--family", "torus", "--n", "1", "--region", "ht:1")
    assert code == 0 and out.strip() == "1/2"


def test_v_invariants(capsys):
    code, out, _ = run(capsys, "v", "--family", "torus", "--n", "1", "--m", "0,1,2")
    assert code == 0 and out.strip() == "-2,0,0"


def test_grid_emit_and_validate(tmp_path, capsys):
    path = tmp_path / "g.json"
    assert run(capsys, "grid", "--p", "7", "--spinc", "1", "--emit", str(path))[0] == 0
    data = json.loads(path.read_text())
    assert len(data["generators"]) == 14
    assert {"A", "M", "name", "spinc"} <= set(data["generators"][0])
    assert {"from", "to", "m"} == set(data["arrows"][0])
    code, out, _ = run(capsys, "validate", "--complex", str(path))
    assert code == 0 and out.strip() == "valid"


def test_validate_reports_violation(tmp_path, capsys):
    bad = {
        "generators": [
            {"name": "x1", "A": 1, "M": "0/1", "spinc": None},
            {"name": "x2", "A": 0, "M": "-1/1", "spinc": None},
            {"name": "x3", "A": -1, "M": "-2/1", "spinc": None},
        ],
        "arrows": [{"from": "x2", "to": "x3", "m": 0}, {"from": "x2", "to": "x1", "m": 0}],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, out, _ = run(capsys, "validate", "--complex", str(path))
    assert code == 3 and "maslov" in out and "x2" in out
    code, _, err = run(capsys, "tau", "--complex", str(path))
    assert code == 3 and "InvalidComplex" in err


def test_usage_and_io_errors(tmp_path, capsys):
    assert run(capsys, "bogus")[0] == 1
    assert run(capsys, "upsilon")[0] == 1
    assert run(capsys, "validate", "--complex", str(tmp_path / "missing.json"))[0] == 1
    assert run(capsys, "--help")[0] == 0


def test_models_and_lift(tmp_path, capsys):
    path = tmp_path / "f.json"
    assert run(capsys, "models", "--fused", "0,5", "--emit", str(path))[0] == 0
    assert len(cc.loads(path.read_text())) == 10
    assert run(capsys, "models", "--fused", "2,3", "--compare-grid", "7,2")[0] == 0
    assert run(capsys, "models", "--fused", "2,3", "--reduce", "2", "--compare-grid", "7,2")[0] == 2
    table = tmp_path / "t.csv"
    assert run(capsys, "lift", "--family", "twist", "--n", "4", "--table", str(table))[0] == 0
    lines = table.read_text().splitlines()
    assert lines[0] == "i,j,A,class" and len(lines) == 1 + 41
    s0 = tmp_path / "s0.json"
    code, out, _ = run(capsys, "lift", "--family", "torus", "--n", "3", "--s0", str(s0), "--zero-classes")
    assert code == 0 and out.strip() == "zero classes: -3,3"
    assert up.upsilon_function(cc.loads(s0.read_text())) == up.upsilon_function(oo.torus_staircase(3))


def test_compare(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(cc.dumps(oo.torus_staircase(1)))
    b.write_text(cc.dumps(cc.direct_sum(oo.torus_staircase(1), cc.acyclic_box())))
    assert run(capsys, "compare", str(a), str(b))[0] == 0
    b.write_text(cc.dumps(cc.unknot()))
    assert run(capsys, "compare", str(a), str(b))[0] == 2
    assert run(capsys, "compare", "--graded", str(a), str(a))[0] == 0


def test_compare_cap(tmp_path, capsys, monkeypatch):
    a = tmp_path / "a.json"
    a.write_text(cc.dumps(cc.tensor(oo.torus_staircase(2), oo.torus_staircase(1))))
    monkeypatch.setenv("UPSILON_CAP", "1000")
    code, out, _ = run(capsys, "compare", str(a), str(a))
    assert code == 1 and out.startswith("inconclusive")
    monkeypatch.setenv("UPSILON_CAP", "none")
    assert run(capsys, "compare", str(a), str(a))[0] == 0
    monkeypatch.setenv("UPSILON_CAP", "lots")
    assert run(capsys, "compare", str(a), str(a))[0] == 1


def test_obstruct(tmp_path, capsys):
    G = gd.build_torus_grid(5)
    U5 = co.cyclic_upsilon_map(5, {h: up.upsilon_function(gd.spinc_slice(G, h)) for h in range(-2, 3)})
    m5 = tmp_path / "m5.json"
    m5.write_text(co.upsilon_map_to_json(U5))
    assert run(capsys, "obstruct", "slice", "--upsilon-map", str(m5), "--group", "5")[0] == 2
    m9 = tmp_path / "m9.json"
    m9.write_text(json.dumps({"group": [9], "upsilon": {str(k): [[0, 0], [2, 0]] for k in range(9)}}))
    code, out, _ = run(capsys, "obstruct", "slice", "--upsilon-map", str(m9), "--group", "9")
    assert code == 0 and "order 3" in out
    assert run(capsys, "obstruct", "concordance", "--upsilon-map", str(m5), "--other", str(m5))[0] == 0
    assert run(capsys, "obstruct", "finite-order", "--upsilon-map", str(m5), "--p", "5", "--t", "1")[0] == 2
    assert run(capsys, "obstruct", "independence", "--ps", "3,5", "--bound", "2")[0] == 0
    assert run(capsys, "obstruct", "det-bound", "--n", "1", "--det", "3")[0] == 0
    assert run(capsys, "obstruct", "det-bound", "--n", "12", "--det", "5")[0] == 2


@given(seeds)
@settings(max_examples=15)
def test_build_round_trip(seed):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        assert cli.run(["build", "--family", "random", "--seed", str(seed)]) == 0
    K = cc.loads(buf.getvalue())
    assert cc.validate(K) == []
    buf2 = io.StringIO()
    with contextlib.redirect_stdout(buf2):
        cli.run(["--seed", str(seed), "build", "--family", "random"])
    assert buf2.getvalue() == buf.getvalue()


@given(seeds)
@settings(max_examples=15)
def test_upsilon_csv_round_trip(seed):
    K = random_complex(seed)
    with tempfile.TemporaryDirectory() as d:
        src = f"{d}/k.json"
        with open(src, "w") as fh:
            fh.write(cc.dumps(K))
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            assert cli.run(["upsilon", "--complex", src]) == 0
    assert up.PiecewiseLinear.from_csv(buf.getvalue()) == up.upsilon_function(K)


@pytest.mark.skipif(shutil.which("upsilon-cover") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["upsilon-cover", "tau", "--family", "torus", "--n", "3"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "3"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "upsilon_cover.cli", "tau", "--family", "twist", "--n", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "0"
