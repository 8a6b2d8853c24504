import json

import pytest

from hgfrob.cli import EXIT_INVALID, EXIT_MISMATCH, EXIT_OK, EXIT_PRECISION, RunConfig, main
from hgfrob.hgdata import DataError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_data_quintic(capsys):
    code, out, _ = run(capsys, "data", "--alpha", "1/5,2/5,3/5,4/5", "--beta", "0,0,0,0")
    row = json.loads(out)
    assert code == EXIT_OK
    assert row["weight"] == 3 and row["wild_primes"] == [5]
    assert row["exponents"]["inf"] == ["1/5", "2/5", "3/5", "4/5"]


def test_gamma_at_zero(capsys):
    code, out, _ = run(capsys, "gamma", "--p", "7", "--prec", "10", "--x", "0")
    assert code == EXIT_OK and json.loads(out)["value"] == 1


def test_euler_example(capsys):
    code, out, _ = run(capsys, "euler", "--alpha", "1/3,2/3", "--beta", "1/4,3/4", "--p", "13",
                       "--t", "2", "--prec", "20")
    row = json.loads(out)
    assert code == EXIT_OK
    assert len(row["coeffs"]) == 3 and row["coeffs"][2] == 13 and row["sign"] == 1
    assert set(row) >= {"alpha", "beta", "p", "t", "coeffs", "certificate", "variant"}


def test_table_format(capsys):
    code, out, _ = run(capsys, "euler", "--alpha", "1/3,2/3", "--beta", "1/4,3/4", "--p", "7",
                       "--t", "2", "--format", "table")
    assert code == EXIT_OK
    header, line = out.splitlines()
    assert header.split()[:3] == ["p", "t", "coeffs"]


def test_sweep_is_ordered_and_deterministic(capsys, monkeypatch):
    args = ("sweep", "--alpha", "1/3,2/3", "--beta", "1/4,3/4", "--t", "2", "--X", "23")
    monkeypatch.setenv("HGFROB_JOBS", "3")
    code, out, _ = run(capsys, *args)
    rows = [json.loads(x) for x in out.splitlines()]
    assert code == EXIT_OK
    assert [r["p"] for r in rows] == [5, 7, 11, 13, 17, 19, 23]
    monkeypatch.setenv("HGFROB_JOBS", "1")
    _, out2, _ = run(capsys, *args)
    assert out == out2


@pytest.mark.parametrize("argv", [
    ("euler", "--alpha", "1/3", "--beta", "1/3", "--p", "7", "--t", "2"),
    ("euler", "--alpha", "1/3,2/3", "--beta", "1/4,3/4", "--p", "3", "--t", "2"),
    ("euler", "--alpha", "1/3,2/3", "--beta", "1/4,3/4", "--p", "7", "--t", "8"),
    ("euler", "--alpha", "1/3,2/3", "--beta", "1/4,3/4", "--p", "7", "--t", "2", "--prec", "0"),
    ("euler", "--alpha", "1/3,2/3", "--beta", "1/4,3/4"),
    ("gamma", "--p", "9", "--x", "1"),
    ("gamma", "--p", "7", "--x", "1/7"),
    ("data", "--alpha", "1/2,,1", "--beta", "0"),
    ("bogus",),
])
def test_validation_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_INVALID
    assert out == "" and err


def test_bad_jobs_env(capsys, monkeypatch):
    monkeypatch.setenv("HGFROB_JOBS", "many")
    code, _, err = run(capsys, "sweep", "--alpha", "1/3,2/3", "--beta", "1/4,3/4", "--t", "2", "--X", "7")
    assert code == EXIT_INVALID and "HGFROB_JOBS" in err


def test_precision_failure_exit_code(capsys):
    code, _, err = run(capsys, "euler", "--alpha", "1/3,2/3", "--beta", "1/4,3/4", "--p", "7", "--t", "2",
                       "--M", "40", "--e", "5")
    assert code == EXIT_PRECISION and "precision" in err


def test_compare_exit_codes(capsys, tmp_path, fixture_path):
    lines = fixture_path.read_text().splitlines()[:3]
    ok = tmp_path / "ok.jsonl"
    ok.write_text("\n".join(lines))
    code, out, err = run(capsys, "compare", "--fixtures", str(ok))
    assert code == EXIT_OK and "3/3" in err
    rec = json.loads(lines[0])
    rec["coeffs"][1] += 1
    bad = tmp_path / "bad.jsonl"
    bad.write_text(json.dumps(rec))
    code, out, err = run(capsys, "compare", "--fixtures", str(bad))
    row = json.loads(out)
    assert code == EXIT_MISMATCH and not row["passed"] and "certificate" in row
    broken = tmp_path / "broken.jsonl"
    broken.write_text("{")
    code, _, err = run(capsys, "compare", "--fixtures", str(broken))
    assert code == EXIT_INVALID and "line 1" in err


def test_selfcheck_quick(capsys):
    code, out, _ = run(capsys, "selfcheck", "--quick")
    assert code == EXIT_OK
    assert all(line.startswith("ok") for line in out.splitlines())


def test_run_config_invariants():
    with pytest.raises(DataError):
        RunConfig("1/2", "0", 2)
    with pytest.raises(DataError):
        RunConfig("1/2", "0", 2, p=7, X=10)
    with pytest.raises(DataError):
        RunConfig("1/2", "0", 2, p=7, N=0)
    assert RunConfig("1/2", "0", 2, X=10).data.n == 1
