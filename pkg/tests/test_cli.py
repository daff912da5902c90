import csv
import json
import subprocess
import sys

import pytest

from hhbounds import catalog, cli, harness

NEG_ABS = json.dumps({"kind": "neg_abs", "normal": [0.0, 1.0]})
DIAMOND = json.dumps({"kind": "parallelogram", "vertices": [[1, 0], [0, 1], [-1, 0], [0, -1]]})


def _run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_rows_per_seed_and_entry(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code, _, _ = _run(["verify", "--shape", "hexagon", "--seeds", "50", "--format", "csv",
                       "--out", str(out), "--tol", "1:1e-9,2:1e-8"], capsys)
    assert code == cli.EXIT_OK
    rows = list(csv.DictReader(out.open()))
    n_entries = len(catalog.entries_for(harness.canonical_shapes()["hexagon"]))
    assert len(rows) == 50 * n_entries
    assert tuple(rows[0]) == cli.CSV_COLUMNS
    assert {r["holds"] for r in rows} == {"true"}


def test_verify_is_byte_reproducible(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        code, _, _ = _run(["verify", "--shape", "diamond", "--seeds", "3,1,2", "--out", str(p)], capsys)
        assert code == cli.EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()
    rows = json.loads(paths[0].read_text())
    assert sorted({r["seed"] for r in rows}) == [1, 2, 3]


def test_violation_exit_code(capsys):
    code, out, err = _run(["bound", "--shape", DIAMOND, "--entry", "par_center",
                           "--function", NEG_ABS], capsys)
    assert code == cli.EXIT_VIOLATION
    row = json.loads(out)
    assert row["lhs"] == pytest.approx(0.0) and row["rhs"] == pytest.approx(-1 / 3)
    code, out, err = _run(["verify", "--shape", DIAMOND, "--entry", "ABCDO1,ABCDO2,par_center",
                           "--function", NEG_ABS], capsys)
    assert code == cli.EXIT_VIOLATION
    assert "violation: entry par_center" in err
    holds = {r["entry_id"]: r["holds"] for r in json.loads(out)}
    assert holds == {"ABCDO1": True, "ABCDO2": True, "par_center": False}


def test_bound_with_expressions(capsys):
    code, out, _ = _run(["bound", "--shape", "annulus", "--entry", "usL", "--tol", "1e-10",
                         "--expressions"], capsys)
    assert code == cli.EXIT_OK
    row = json.loads(out)
    assert row["lhs"] == pytest.approx(22 / 9, abs=1e-8)
    assert row["expressions"][0]["direction"] == "lower"


@pytest.mark.parametrize("argv", [
    ["verify", "--shape", "{not json"],
    ["verify", "--shape", "hexagon", "--seeds", "x"],
    ["verify", "--shape", "hexagon", "--tol", "-1"],
    ["verify", "--shape", "hexagon", "--entry", "nope"],
    ["verify", "--shape", "hexagon", "--function", '{"kind": "max_affine", "d": 3}'],
    ["verify", "--shape", "hexagon", "--budget", "0"],
    ["bound", "--shape", "hexagon", "--entry", "usL"],
    ["bound", "--shape", "hexagon"],
    ["converge", "--shape", "hexagon"],
    ["converge", "--shape", "annulus", "--n", "3"],
    ["frobnicate"],
])
def test_malformed_input_exit_code(argv, capsys):
    code, _, err = _run(argv, capsys)
    assert code == cli.EXIT_INPUT


def test_converge_table(capsys):
    code, out, _ = _run(["converge", "--shape", "annulus", "--n", "12,24", "--format", "csv"], capsys)
    assert code == cli.EXIT_OK
    rows = list(csv.DictReader(out.splitlines()))
    assert [r["n"] for r in rows] == ["12", "24"]
    assert float(rows[0]["difference"]) > float(rows[1]["difference"])


def test_manifest(capsys):
    code, out, _ = _run(["manifest"], capsys)
    assert code == cli.EXIT_OK
    assert len(json.loads(out)) == len(catalog.ENTRIES)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hhbounds.cli", "manifest", "--format", "csv"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0].startswith("id,anchor")
