import csv
import io
import json
import math
import subprocess
import sys

import pytest

from charsum.cli import list_suites, main
from charsum.suites import SUITES


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_chars_list(capsys):
    code, out, _ = run(capsys, "chars", "list", "--modulus", "5")
    assert code == 0 and len(csv_rows(out)) == 4
    code, out, _ = run(capsys, "chars", "list", "--modulus", "31", "--order", "30", "--primitive")
    rows = csv_rows(out)
    assert code == 0 and len(rows) == 8
    assert all(r["order"] == "30" and r["primitive"] == "True" for r in rows)
    code, out, _ = run(capsys, "chars", "list", "--modulus", "4", "--order", "3")
    assert code == 0 and csv_rows(out) == []


def test_chars_describe(capsys):
    code, out, _ = run(capsys, "chars", "describe", "-q", "31", "--index", "1")
    desc = json.loads(out)
    assert code == 0 and desc["order"] == 30


def test_chars_bad_flags(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["chars", "list", "--modulus", "2"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "chars", "describe", "-q", "7")
    assert code == 2 and "--index" in err
    code, _, _ = run(capsys, "sums", "-q", "7", "--index", "99")
    assert code == 2


def test_sums_full_period(capsys):
    code, out, _ = run(capsys, "sums", "-q", "31", "--index", "1")
    assert code == 0
    for r in csv_rows(out):
        if r["ell"] != "0":
            assert math.hypot(float(r["re"]), float(r["im"])) <= 1e-9


def test_max_principal(capsys, tmp_path):
    path = tmp_path / "max.csv"
    code, _, _ = run(capsys, "max", "-q", "31", "--index", "1", "--ell", "0", "--out", str(path))
    (row,) = csv_rows(path.read_text())
    assert code == 0 and float(row["M"]) == 30


def test_spectrum_large_epsilon(capsys):
    code, out, _ = run(capsys, "spectrum", "-q", "31", "--index", "1", "--epsilon", "2")
    (row,) = csv_rows(out)
    assert code == 0 and set(row["members"].split()) <= {"0"}


def test_verify_examples(capsys, tmp_path):
    code, out, err = run(capsys, "verify", "pair-count", "--q-max", "500", "--samples", "10")
    assert code == 0 and json.loads(out)["summary"]["failures"] == 0
    csv_path = tmp_path / "f.csv"
    code, out, _ = run(capsys, "verify", "fourier", "--V", "10000", "--csv", str(csv_path))
    rep = json.loads(out)
    assert code == 0
    grid = [r for r in rep["rows"] if r.get("check") == "grid"]
    assert grid and grid[0]["lhs"] <= 1e-4
    assert csv_path.read_text().startswith(",".join(rep["rows"][0]))


def test_verify_unknown_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2
    code, _, _ = run(capsys, "verify")
    assert code == 2


def test_verify_config_error(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "orthogonality", "--q-min", "10", "--q-max", "5")
    assert code == 2 and "empty modulus range" in err
    cfg = tmp_path / "c.cfg"
    cfg.write_text("q_max = 12\n")
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "orthogonality", "--config", str(cfg), "--json", str(out))
    rep = json.loads(out.read_text())
    assert code == 0 and rep["config"]["q_max"] == 12 and rep["summary"]["n"] == 10


def test_list_suites(capsys):
    code, out, _ = run(capsys, "verify", "--list-suites")
    assert code == 0 and out == list_suites()
    assert [line.split()[0] for line in out.splitlines()] == list(SUITES)


def test_snapshot_cycle(capsys, tmp_path):
    snap = str(tmp_path / "o.json")
    base = ["orthogonality", "--snapshot", snap, "--q-max", "40"]
    assert run(capsys, "snapshot", "update", *base)[0] == 0
    assert run(capsys, "snapshot", "compare", *base)[0] == 0
    code, _, err = run(capsys, "snapshot", "compare", *base, "--tolerance", "0.2")
    assert code == 1 and "config hash mismatch" in err
    code, _, _ = run(capsys, "snapshot", "compare", "orthogonality", "--snapshot", str(tmp_path / "none.json"))
    assert code == 2


def test_snapshot_injected_regression(capsys, tmp_path):
    snap = tmp_path / "hmt.json"
    base = ["hmt", "--snapshot", str(snap), "--n-moduli", "2", "--q-max", "400"]
    assert run(capsys, "snapshot", "update", *base)[0] == 0
    data = json.loads(snap.read_text())
    data["ratios"][0] *= 1.5
    snap.write_text(json.dumps(data))
    code, _, err = run(capsys, "snapshot", "compare", *base)
    assert code == 1 and "drifted" in err


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "charsum.cli", "chars", "list", "-q", "5"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and len(res.stdout.splitlines()) == 5
