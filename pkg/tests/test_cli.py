import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from rrseries.cli import EXPANSIONS, all_check_names, main
from rrseries.hardhex import solution_highz


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--id", "RII-F2-0", "--order", "20", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert set(rec) == {"id", "order", "status", "coefficients", "first_mismatch"}
    assert rec["status"] == "pass" and rec["first_mismatch"] is None
    assert [int(c) for c in rec["coefficients"]][-1] == 436


def test_expand_rho_low(capsys):
    code, out, _ = run(capsys, "expand", "--fn", "rho-low", "--order", "5", "--format", "json")
    assert code == 0
    assert json.loads(out)["coefficients"] == ["0", "1", "-7", "58", "-519", "4856"]


def test_json_round_trip_exact(capsys):
    code, out, _ = run(capsys, "expand", "--fn", "rho2-high", "--order", "12", "--format", "json")
    assert code == 0
    coeffs = [Fraction(c) for c in json.loads(out)["coefficients"]]
    assert tuple(coeffs) == solution_highz(12).rho2.coeffs
    assert all(isinstance(c, str) for c in json.loads(out)["coefficients"])


def test_expand_csv(capsys):
    code, out, _ = run(capsys, "expand", "--fn", "G", "--order", "5", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["degree", "coefficient"]
    assert [r[1] for r in rows[1:]] == ["1", "1", "1", "1", "2", "2"]


def test_every_expansion_runs(capsys):
    for name in EXPANSIONS:
        code, out, _ = run(capsys, "expand", "--fn", name, "--order", "3", "--format", "json")
        assert code == 0, name
        assert len(json.loads(out)["coefficients"]) >= 1


def test_hardhex_text(capsys):
    code, out, _ = run(capsys, "hardhex", "--rows", "4", "--cols", "4")
    assert code == 0
    assert out.splitlines()[1].split()[:3] == ["1", "16", "72"]


def test_hardhex_brute(capsys):
    code, out, _ = run(capsys, "hardhex", "--rows", "4", "--cols", "5", "--method", "brute", "--format", "json")
    assert code == 0 and json.loads(out)["coefficients"][:3] == ["1", "20", "130"]


def test_exit_codes(capsys):
    assert run(capsys, "verify", "--id", "NOPE", "--order", "5")[0] == 2
    assert run(capsys, "verify", "--id", "RI-1", "--order", "-1")[0] == 2
    assert run(capsys, "expand", "--fn", "nope", "--order", "5")[0] == 2
    assert run(capsys, "hardhex", "--rows", "3", "--cols", "5")[0] == 2
    assert run(capsys, "hardhex", "--rows", "9", "--cols", "9")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    code, _, err = run(capsys, "verify", "--id", "NOPE", "--order", "5")
    assert err.startswith("error:")


def test_mismatch_exit_code(capsys, monkeypatch):
    from rrseries import cli

    monkeypatch.setitem(cli.EXTRA_CHECKS, "HH-CRITICAL", lambda order: cli._bool_report("HH-CRITICAL", 0, False))
    assert run(capsys, "verify", "--id", "HH-CRITICAL", "--order", "1")[0] == 1


def test_report_all_csv(capsys):
    code, out, _ = run(capsys, "report-all", "--order", "20", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["id"] for r in rows] == all_check_names()
    assert all(r["status"] == "pass" for r in rows)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "rrseries", "verify", "--id", "RI-1", "--order", "30"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("RI-1: pass")
