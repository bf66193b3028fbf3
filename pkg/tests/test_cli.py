import json
import subprocess
import sys

import pytest

from heckesign import cli
from heckesign.trace import TraceIntegralityError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_trace(capsys):
    code, out, _ = run(capsys, "trace", "2", "1", "12", "--format", "csv")
    assert code == 0 and out == "m,N,k,trace\n2,1,12,-24\n"
    code, out, _ = run(capsys, "trace", "1", "11", "2", "--format", "json")
    assert json.loads(out)["trace"] == 1


def test_trace_breakdown(capsys):
    from fractions import Fraction

    code, out, _ = run(capsys, "trace", "3", "7", "4", "--breakdown", "--format", "json")
    rec = json.loads(out)
    terms = [Fraction(rec[k]) for k in ("A1", "A2", "A3", "A4")]
    assert terms[0] - terms[1] - terms[2] + terms[3] == rec["trace"]


def test_a2(capsys):
    _, out, _ = run(capsys, "a2", "3", "2", "12", "--format", "json")
    assert json.loads(out) == {"m": 3, "N": 2, "k": 12, "dim": 2, "a2": 63504, "sign": "+"}
    _, out, _ = run(capsys, "a2", "7", "12", "4", "--format", "json")
    assert json.loads(out)["a2"] == 0
    _, out, _ = run(capsys, "a2", "3", "5", "2", "--format", "json")
    assert (json.loads(out)["a2"], json.loads(out)["dim"]) == (0, 0)


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "4", "2700001", "2", "--format", "json")
    assert code == 0 and json.loads(out)["decision"] == "CertifiedPositive"
    code, _, err = run(capsys, "certify", "4", "2700002", "2")
    assert code == 1 and "gcd" in err


def test_theta(capsys):
    _, out, _ = run(capsys, "theta", "43", "--format", "json")
    rec = json.loads(out)
    assert rec["theta3"] == "1/22" and rec["theta1_sq"] == "43/484"
    _, out, _ = run(capsys, "theta", "43", "--format", "table")
    assert "0.045454545455" in out and "e-" not in out


def test_theta_verify_table(capsys):
    code, out, _ = run(capsys, "theta", "--verify-table", "--cap", "100000")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1].endswith("pass")
    assert sum(line.endswith(",pass") for line in lines) == 5  # four rows up to 8800 plus the tail
    assert sum(line.endswith("skipped") for line in lines) == 3


def test_search_matches_table(capsys, tmp_path):
    out_file = tmp_path / "t3.csv"
    code, _, err = run(capsys, "search", "2", "--nmax", "57", "--kmax", "26", "--out", str(out_file))
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert lines[0] == "N,k,dim,a2,sign" and len(lines) == 36
    assert json.loads(err)["exceptional"] == 35


def test_search_thread_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("HECKESIGN_THREADS", "3")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "search", "3", "--nmax", "100", "--kmax", "20", "--out", str(a))[0] == 0
    assert run(capsys, "search", "3", "--nmax", "100", "--kmax", "20", "--threads", "1", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    monkeypatch.setenv("HECKESIGN_THREADS", "lots")
    assert run(capsys, "search", "3", "--nmax", "10", "--kmax", "4")[0] == 1


def test_search_budget_with_checkpoint(capsys, tmp_path):
    ck = tmp_path / "ck.jsonl"
    code, _, err = run(capsys, "search", "3", "--nmax", "300", "--kmax", "30", "--checkpoint", str(ck),
                       "--max-seconds", "0")
    assert code == 3 and "resume" in err
    code, out, _ = run(capsys, "search", "3", "--nmax", "300", "--kmax", "30", "--checkpoint", str(ck),
                       "--format", "csv")
    assert code == 0 and len(out.splitlines()) == 53


def test_search_formats(capsys):
    _, out, _ = run(capsys, "search", "2", "--nmax", "57", "--kmax", "26", "--format", "json")
    assert len(out.splitlines()) == 35 and json.loads(out.splitlines()[-1])["N"] == 57
    _, out, _ = run(capsys, "search", "2", "--nmax", "57", "--kmax", "26", "--format", "table")
    assert out.splitlines()[0].split() == ["N", "k", "dim", "a2"]


@pytest.mark.parametrize(
    "argv",
    [[], ["bogus"], ["trace", "3", "7"], ["trace", "0", "7", "4"], ["search", "3"],
     ["search", "3", "--paper-region", "--nmax", "5"], ["theta"], ["a2", "3", "6", "4"],
     ["a2", "3", "5", "3"], ["search", "3", "--nmax", "5", "--kmax", "4", "--threads", "0"]],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(cli.main(argv))
    assert exc.value.code == 1


def test_integrality_fault_exit_code(capsys, monkeypatch):
    def broken(*_):
        raise TraceIntegralityError("odd bracket")

    monkeypatch.setattr(cli, "sign_report", broken)
    code, _, err = run(capsys, "a2", "3", "5", "4")
    assert code == 2 and "integrality" in err


def test_selftest_quick(capsys):
    code, out, _ = run(capsys, "selftest", "--quick")
    assert code == 0 and "selftest passed" in out


def test_selftest_names_failure(capsys, monkeypatch):
    real = cli._selftest_checks

    def rigged(quick):
        checks = real(quick)
        return checks[:1] + [("deliberately broken invariant", lambda: False)] + checks[1:]

    monkeypatch.setattr(cli, "_selftest_checks", rigged)
    code, out, _ = run(capsys, "selftest", "--quick")
    assert code == 2 and "selftest failed: deliberately broken invariant" in out


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "heckesign.cli", "trace", "3", "1", "12", "--format", "csv"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[-1] == "3,1,12,252"
