from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from fracvar.cli import main
from fracvar.suites import COLUMNS


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == COLUMNS
    return rows[1:]


def test_ftc_default(tmp_path):
    out = tmp_path / "ftc.csv"
    assert main(["ftc", "--out", str(out)]) == 0
    rows = read_csv(out)
    # ftc1 and ftc2 for 6 functions and 4 orders
    assert len(rows) == 48
    assert {r[-1] for r in rows} == {"true"}


def test_ftc_classical_only(tmp_path):
    out = tmp_path / "ftc.json"
    assert main(["ftc", "--alpha", "1", "--format", "json", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data) == 12 and all(r["alpha"] == 1.0 and r["pass"] is True for r in data)


@pytest.mark.parametrize("alpha", ["1.5", "0", "-0.2", "nan", "abc"])
def test_bad_alpha_exit_2_without_file(tmp_path, alpha):
    out = tmp_path / "x.csv"
    assert main(["ftc", "--alpha", alpha, "--out", str(out)]) == 2
    assert not out.exists()


def test_empty_alpha_list(tmp_path):
    assert main(["identities", "--alpha", "", "--out", str(tmp_path / "x.csv")]) == 2


def test_leibniz_reports_failure(tmp_path):
    out = tmp_path / "l.csv"
    assert main(["leibniz", "--alpha", "0.5", "--out", str(out)]) == 1
    rows = read_csv(out)
    assert len(rows) == 21
    assert "false" in {r[-1] for r in rows}
    assert main(["leibniz", "--alpha", "1", "--out", str(out)]) == 0


def test_theorems_constants_suite(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["theorems", "--suite", "constants", "--out", str(out)]) == 0
    assert all(r[-1] == "true" for r in read_csv(out))


@pytest.mark.parametrize("box", ["1,0;0,1", "0,1", "0,1;0,1;0,1;0,1", "a,b;0,1", "0,1,2;0,1"])
def test_bad_box(tmp_path, box):
    assert main(["theorems", "--box", box, "--out", str(tmp_path / "t.csv")]) == 2


def test_theorems_custom_box(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["theorems", "--alpha", "0.5", "--box=-1,1;0,2", "--out", str(out)]) == 0


def test_identities_and_el_defaults(tmp_path):
    out = tmp_path / "i.csv"
    assert main(["identities", "--out", str(out)]) == 0
    rows = read_csv(out)
    judged = {r[0] for r in rows if r[-1]}
    assert judged == {"identity_ii", "identity_iii", "identity_v"}
    assert main(["el", "--out", str(tmp_path / "e.csv")]) == 0


def test_string_zero_data_zero_grid(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["string", "--shape", "zero", "--alpha", "0.9,1", "--modes", "2", "--out", str(out)]) == 0
    with open(tmp_path / "s_grid.csv", newline="") as fh:
        grid = list(csv.DictReader(fh))
    assert len(grid) == 2 * 21 * 21
    assert all(float(r["w"]) == 0.0 for r in grid)
    assert (tmp_path / "s_sweep.csv").exists()


def test_string_explicit_files(tmp_path):
    paths = {k: tmp_path / f"{k}.json" for k in ("out", "grid", "sweep", "trace")}
    args = ["string", "--alpha", "1", "--modes", "2", "--format", "json", "--out", str(paths["out"])]
    args += ["--grid-out", str(paths["grid"]), "--sweep-out", str(paths["sweep"]), "--trace", str(paths["trace"])]
    assert main(args) == 0
    sweep = json.loads(paths["sweep"].read_text())
    assert sweep[0]["alpha"] == 1.0 and sweep[0]["converged"] is True
    assert json.loads(paths["trace"].read_text())


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"alpha": [0.5], "format": "json"}))
    out = tmp_path / "o.json"
    assert main(["ftc", "--config", str(cfg), "--out", str(out)]) == 0
    assert {r["alpha"] for r in json.loads(out.read_text())} == {0.5}
    assert main(["ftc", "--config", str(cfg), "--alpha", "1", "--out", str(out)]) == 0
    assert {r["alpha"] for r in json.loads(out.read_text())} == {1.0}


@pytest.mark.parametrize("payload", ['{"bogus": 1}', "[1, 2]", "not json", '{"order": 0}', '{"format": "xml"}'])
def test_bad_config(tmp_path, payload):
    cfg = tmp_path / "c.json"
    cfg.write_text(payload)
    assert main(["ftc", "--config", str(cfg)]) == 2


def test_usage_errors():
    assert main([]) == 2
    assert main(["bogus"]) == 2
    assert main(["ftc", "--order", "x"]) == 2
    assert main(["ftc", "--help"]) == 0


def test_determinism_small(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["theorems", "--alpha", "0.5", "--seed", "3", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point_to_stdout():
    proc = subprocess.run([sys.executable, "-m", "fracvar", "ftc", "--alpha", "1"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    lines = proc.stdout.strip().splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert len(lines) == 13
