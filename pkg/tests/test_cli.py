import json
import os
import subprocess
import sys

import pytest

from qstirling.boson_algebra import NormalForm
from qstirling.cli import main
from qstirling.stirling import F, StirlingTable, build_table
from qstirling.suite import SuiteConfig, run_suite


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def usage_error(capsys, *argv):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    capsys.readouterr()
    return exc.value.code


def test_stirling_csv(capsys):
    code, out = run(capsys, "stirling", "--family", "q_second", "--n-max", "3", "--format", "csv")
    assert code == 0
    assert "3,2,2*q + q^2" in out.splitlines()


def test_stirling_text(capsys):
    code, out = run(capsys, "stirling", "--family", "classical_second", "--n-max", "3")
    assert code == 0
    assert "(3,2) 3" in out.splitlines()


@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_stirling_round_trip(capsys, fmt):
    _, out = run(capsys, "stirling", "--family", "reduced_first_xi", "--n-max", "5", "--format", fmt)
    table = StirlingTable.from_json(out) if fmt == "json" else StirlingTable.from_csv(out, "reduced_first_xi")
    assert table == build_table(F.REDUCED_FIRST_XI, 5)


def test_stirling_bad_family(capsys):
    assert usage_error(capsys, "stirling", "--family", "bogus") == 2


def test_stirling_bounds(capsys):
    assert usage_error(capsys, "stirling", "--family", "q_first", "--n-max", "65") == 2
    assert usage_error(capsys, "stirling", "--family", "q_first", "--n-max", "0") == 2


def test_unsafe_large_lifts_the_guard(capsys):
    code, out = run(capsys, "stirling", "--family", "classical_first", "--n-max", "66", "--unsafe-large", "--format", "csv")
    assert code == 0
    assert out.splitlines()[-1].startswith("66,66,")


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["--m", "2", "--kind", "G"], "k=1: p^(1*n) * 1 ; k=2: q"),
        (["--m", "2", "--kind", "M"], "k=1: 1 ; k=2: q"),
        (["--inverse", "--k", "2", "--kind", "M"], "m=1: -1*q^-1 ; m=2: q^-1"),
    ],
)
def test_normal_order_text(capsys, argv, expected):
    code, out = run(capsys, "normal-order", *argv)
    assert code == 0
    assert out.strip() == expected


def test_normal_order_json_round_trip(capsys):
    _, out = run(capsys, "normal-order", "--m", "4", "--kind", "P", "--Q", "symbolic", "--format", "json")
    nf = NormalForm.from_json(out)
    assert nf.power_m == 4 and nf.q_choice.value == "symbolic_Q"


def test_normal_order_right_placement(capsys):
    _, out = run(capsys, "normal-order", "--m", "2", "--kind", "G", "--right")
    assert out.startswith("k=1: p^(1*n) * p^-1")


@pytest.mark.parametrize(
    "argv",
    [
        ["--kind", "G"],
        ["--m", "0"],
        ["--inverse", "--kind", "M"],
        ["--m", "2", "--Q", "sideways"],
        ["--m", "2", "--kind", "Z"],
    ],
)
def test_normal_order_bad_arguments(capsys, argv):
    assert usage_error(capsys, "normal-order", *argv) == 2


def test_verify_full_suite(capsys):
    code, out = run(capsys, "verify", "--n-max", "8", "--dim", "10")
    reports = json.loads(out)
    assert code == 0
    assert all(r["pass"] for r in reports)
    assert {"STIRLING_LIMITS", "SIMILARITY", "EDGE_CONTROL", "E52_GENFUN"} <= {r["id"] for r in reports}


def test_verify_single_identity(capsys):
    code, out = run(capsys, "verify", "--only", "E24_COMMUTATOR", "--dim", "10", "--kind", "P")
    assert code == 0
    reports = json.loads(out)
    assert reports and all(r["id"] == "E24_COMMUTATOR" and r["pass"] for r in reports)
    assert {r["params"]["kind"] for r in reports} == {"P"}


@pytest.mark.parametrize("argv", [["--dim", "1"], ["--dim", "65"], ["--only", "NOPE"], ["--n-max", "0"]])
def test_verify_bad_arguments(capsys, argv):
    assert usage_error(capsys, "verify", *argv) == 2


def test_verify_list(capsys):
    code, out = run(capsys, "verify", "--list")
    ids = out.split()
    assert code == 0 and "SIMILARITY" in ids and "E45_RIGHT_FORM" in ids


def test_verify_failure_exit_code(capsys, monkeypatch):
    import qstirling.suite as suite
    from qstirling.report import VerificationReport

    monkeypatch.setattr(suite, "check_tilde_relation", lambda n: VerificationReport("tilde_relation", passed=False))
    code, out = run(capsys, "verify", "--only", "TILDE_RELATION")
    assert code == 1
    assert json.loads(out)[0]["pass"] is False


def test_verify_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out = run(capsys, "verify", "--only", "SERIES", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())[0]["id"] == "SERIES"


@pytest.mark.parametrize(
    "argv, value",
    [
        (["--what", "commutator", "--level", "1", "--order", "2"], None),
        (["--what", "hamiltonian", "--level", "0", "--order", "1"], "1/2"),
        (["--what", "hamiltonian", "--level", "3", "--order", "1"], None),
    ],
)
def test_series(capsys, argv, value):
    code, out = run(capsys, "series", *argv)
    lines = dict(line.split(": ", 1) for line in out.strip().splitlines())
    assert code == 0
    assert lines["residual"] == "0"
    if value is not None:
        assert lines["value"] == value


def test_series_json(capsys):
    code, out = run(capsys, "series", "--what", "hamiltonian", "--level", "2", "--order", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["residual"] == {} and data["checked_degree"] == 1


def test_series_bad_arguments(capsys):
    assert usage_error(capsys, "series", "--what", "hamiltonian", "--level", "-1") == 2
    assert usage_error(capsys, "series", "--what", "energy", "--level", "1") == 2


def test_missing_command(capsys):
    assert usage_error(capsys) == 2


def test_thread_count_does_not_change_output():
    cfg = SuiteConfig(n_max=5, dim=6, op_max=3, pairs=2)
    serial = [r.to_json() for r in run_suite(cfg, threads=1)]
    parallel = [r.to_json() for r in run_suite(cfg, threads=4)]
    assert serial == parallel
    ids = [json.loads(r)["id"] for r in serial]
    assert ids == sorted(ids)


def test_module_entry_point_is_deterministic():
    env = dict(os.environ, QSTIRLING_THREADS="3")
    cmd = [sys.executable, "-m", "qstirling", "verify", "--n-max", "4", "--dim", "5", "--op-max", "2", "--pairs", "1"]
    a = subprocess.run(cmd, capture_output=True, text=True, env=env)
    b = subprocess.run(cmd, capture_output=True, text=True)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
