import json
from dataclasses import replace
from fractions import Fraction as F

import pytest

from hgfrob.oracle import ComparisonConfig, FixtureError, load_fixtures, parse_fixture, run_comparisons

GOOD = {"alpha": ["1/3", "2/3"], "beta": ["1/4", "3/4"], "t": "2", "p": 7, "coeffs": [1, 2, 7],
        "source": "test", "convention": "inverse"}


def _write(tmp_path, lines):
    path = tmp_path / "fx.jsonl"
    path.write_text("\n".join(lines) + "\n")
    return path


def test_empty_file(tmp_path):
    assert load_fixtures(_write(tmp_path, [])) == []
    assert load_fixtures(_write(tmp_path, ["# comment", ""])) == []


def test_committed_fixtures_load(fixture_path):
    fx = load_fixtures(fixture_path)
    required = {(f.t, f.p) for f in fx if f.alpha == (F(1, 3), F(2, 3)) and f.beta == (F(1, 4), F(3, 4))}
    assert {(F(t), p) for t in (2, 3) for p in (7, 11, 13)} <= required


@pytest.mark.parametrize("change,needle", [
    ({"coeffs": [1, 2]}, "degree 1 does not match n = 2"),
    ({"coeffs": [2, 2, 7]}, "constant term"),
    ({"p": 3}, "field 'p'"),
    ({"p": "7"}, "field 'p'"),
    ({"t": "1"}, "field 'p'"),
    ({"t": "x"}, "field 't'"),
    ({"alpha": ["1/4", "2/3"]}, "alpha"),
    ({"coeffs": "1,2,7"}, "'coeffs' must be a list"),
    ({"convention": "sideways"}, "convention"),
    ({"extra": 1}, "unknown field"),
])
def test_schema_violations(tmp_path, change, needle):
    rec = dict(GOOD, **change)
    path = _write(tmp_path, [json.dumps(GOOD), json.dumps(rec)])
    with pytest.raises(FixtureError) as exc:
        load_fixtures(path)
    assert str(exc.value).startswith("line 2")
    assert needle in str(exc.value)


def test_missing_field_and_bad_json(tmp_path):
    rec = dict(GOOD)
    del rec["coeffs"]
    with pytest.raises(FixtureError, match="line 1: missing field 'coeffs'"):
        load_fixtures(_write(tmp_path, [json.dumps(rec)]))
    with pytest.raises(FixtureError, match="line 1: invalid JSON"):
        load_fixtures(_write(tmp_path, ["{nope"]))


def test_conventions():
    fx = parse_fixture(GOOD)
    assert fx.parameter == F(1, 2) and fx.t0 == 4
    direct = parse_fixture(dict(GOOD, convention="direct"))
    assert direct.parameter == 2
    assert json.loads(fx.to_json())["coeffs"] == [1, 2, 7]


def test_matching_and_perturbed():
    fx = parse_fixture(GOOD)
    report = run_comparisons([fx, replace(fx, coeffs=(1, 3, 7))])
    assert [r.passed for r in report.results] == [True, False]
    bad = report.results[1]
    assert bad.computed == (1, 2, 7)
    assert bad.certificate["absprec"] >= 20 and "tail_valuation" in bad.certificate
    assert report.summary() == "1/2 fixtures agree" and not report.ok


def test_swap_derived_fixture():
    fx = parse_fixture(GOOD)
    sw = fx.swapped()
    assert sw.alpha == fx.beta and sw.t == F(1, 2)
    report = run_comparisons([fx, sw])
    assert report.ok


def test_parallel_matches_serial(fixture_path):
    fx = load_fixtures(fixture_path)[:9]
    serial = run_comparisons(fx)
    par = run_comparisons(fx, ComparisonConfig(jobs=3))
    assert [r.computed for r in serial.results] == [r.computed for r in par.results]


def test_precision_shortfall_is_reported(monkeypatch):
    import hgfrob.oracle as oracle
    from hgfrob.frobenius import TruncationError

    def fail(*args, **kwargs):
        raise TruncationError("no certified Frobenius matrix")
    monkeypatch.setattr(oracle, "euler_factors", fail)
    r = run_comparisons([parse_fixture(GOOD)]).results[0]
    assert not r.passed and r.computed is None and "certified" in r.error
