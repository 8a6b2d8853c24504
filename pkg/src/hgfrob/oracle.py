"""External and internal cross-checks for computed Euler factors.

Fixture files are JSON lines.  Each record has

    alpha, beta   lists of rationals written as strings ("1/3") or integers
    t             the specialization parameter, a rational string
    p             an odd prime
    coeffs        integers c_0 = 1, ..., c_n of det(1 - Frob T)
    source        free-form provenance label
    convention    optional: "direct" (default) when t is this package's
                  parameter, "inverse" when it is its reciprocal

Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .frobenius import TruncationError, euler_factors
from .hgdata import DataError, HGData, build, is_good
from .padic import PrecisionError

CONVENTIONS = ("direct", "inverse")


class FixtureError(ValueError):
    """A fixture record violates the schema."""


@dataclass(frozen=True)
class Fixture:
    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]
    t: Fraction
    p: int
    coeffs: tuple[int, ...]
    source: str = ""
    convention: str = "direct"

    @property
    def data(self) -> HGData:
        return build(self.alpha, self.beta)

    @property
    def parameter(self) -> Fraction:
        """The fixture's t expressed in this package's convention."""
        return self.t if self.convention == "direct" else 1 / self.t

    @property
    def t0(self) -> int:
        z = self.parameter
        return z.numerator * pow(z.denominator, -1, self.p) % self.p

    def swapped(self) -> "Fixture":
        """The same motive written as (beta; alpha; 1/t)."""
        return Fixture(self.beta, self.alpha, 1 / self.t, self.p, self.coeffs,
                       f"swap of {self.source}".strip(), self.convention)

    def to_json(self) -> str:
        return json.dumps({"alpha": [str(a) for a in self.alpha], "beta": [str(b) for b in self.beta],
                           "t": str(self.t), "p": self.p, "coeffs": list(self.coeffs),
                           "source": self.source, "convention": self.convention})


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise FixtureError(f"{where}: expected an integer or a rational string, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise FixtureError(f"{where}: cannot parse {value!r} as a rational") from None


def parse_fixture(record: dict, where: str = "record") -> Fixture:
    if not isinstance(record, dict):
        raise FixtureError(f"{where}: expected an object")
    for key in ("alpha", "beta", "t", "p", "coeffs"):
        if key not in record:
            raise FixtureError(f"{where}: missing field {key!r}")
    unknown = set(record) - {"alpha", "beta", "t", "p", "coeffs", "source", "convention"}
    if unknown:
        raise FixtureError(f"{where}: unknown field(s) {sorted(unknown)}")
    for key in ("alpha", "beta", "coeffs"):
        if not isinstance(record[key], list):
            raise FixtureError(f"{where}: field {key!r} must be a list")
    alpha = tuple(_rational(x, f"{where}, field 'alpha'") for x in record["alpha"])
    beta = tuple(_rational(x, f"{where}, field 'beta'") for x in record["beta"])
    t = _rational(record["t"], f"{where}, field 't'")
    p = record["p"]
    if isinstance(p, bool) or not isinstance(p, int):
        raise FixtureError(f"{where}, field 'p': expected an integer")
    coeffs = record["coeffs"]
    if any(isinstance(c, bool) or not isinstance(c, int) for c in coeffs):
        raise FixtureError(f"{where}, field 'coeffs': expected integers")
    convention = record.get("convention", "direct")
    if convention not in CONVENTIONS:
        raise FixtureError(f"{where}, field 'convention': expected one of {CONVENTIONS}")
    source = record.get("source", "")
    if not isinstance(source, str):
        raise FixtureError(f"{where}, field 'source': expected a string")
    try:
        d = build(alpha, beta)
    except DataError as exc:
        raise FixtureError(f"{where}, fields 'alpha'/'beta': {exc}") from None
    if len(coeffs) != d.n + 1:
        raise FixtureError(f"{where}, field 'coeffs': degree {len(coeffs) - 1} does not match n = {d.n}")
    if coeffs[0] != 1:
        raise FixtureError(f"{where}, field 'coeffs': constant term must be 1")
    if t == 0:
        raise FixtureError(f"{where}, field 't': t must be nonzero")
    fx = Fixture(alpha, beta, t, p, tuple(coeffs), source, convention)
    if not is_good(d, p, fx.parameter):
        raise FixtureError(f"{where}, field 'p': p={p} is not a good tame prime for t={t}")
    return fx


def load_fixtures(path) -> list[Fixture]:
    out = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FixtureError(f"line {lineno}: invalid JSON ({exc.msg})") from None
        out.append(parse_fixture(record, f"line {lineno}"))
    return out


# ----------------------------------------------------------------------
# comparisons


@dataclass(frozen=True)
class ComparisonConfig:
    N: int = 20
    variant: str = "motivic"
    calibration: dict = field(default_factory=dict)  # HGData -> integer scale of T
    max_escalations: int = 4
    jobs: int = 1


@dataclass(frozen=True)
class ComparisonResult:
    fixture: Fixture
    computed: tuple[int, ...] | None
    passed: bool
    certificate: dict | None
    error: str | None = None


@dataclass
class ComparisonReport:
    results: list[ComparisonResult]

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.results)

    @property
    def failed(self) -> int:
        return len(self.results) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def summary(self) -> str:
        return f"{self.passed}/{len(self.results)} fixtures agree"


def _compare_group(args) -> list[ComparisonResult]:
    d, p, fixtures, cfg = args
    cal = cfg.calibration.get(d, 1)
    try:
        efs, F = euler_factors(d, p, [fx.t0 for fx in fixtures], cfg.N, cfg.variant,
                               calibration=cal, max_escalations=cfg.max_escalations)
    except (PrecisionError, TruncationError, DataError) as exc:
        return [ComparisonResult(fx, None, False, None, str(exc)) for fx in fixtures]
    cert = dict(F.certificate.as_dict(), M=F.M, e=F.e)
    return [ComparisonResult(fx, ef.coeffs, ef.coeffs == fx.coeffs, cert,
                             None if ef.coeffs == fx.coeffs else "coefficient mismatch")
            for fx, ef in zip(fixtures, efs)]


def run_comparisons(fixtures, config: ComparisonConfig | None = None) -> ComparisonReport:
    """Compare every fixture with the computed Euler factor.

    Fixtures sharing a datum and a prime share one Frobenius matrix.  Each
    result carries the certificate of the computed side, so a precision
    shortfall can be told apart from a wrong expectation.
    """
    cfg = config or ComparisonConfig()
    fixtures = list(fixtures)
    groups: dict = {}
    for k, fx in enumerate(fixtures):
        groups.setdefault((fx.data, fx.p), []).append(k)
    tasks = [(d, p, [fixtures[k] for k in idx], cfg) for (d, p), idx in groups.items()]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(_compare_group, tasks))
    else:
        chunks = [_compare_group(t) for t in tasks]
    results: list = [None] * len(fixtures)
    for idx, chunk in zip(groups.values(), chunks):
        for k, r in zip(idx, chunk):
            results[k] = r
    return ComparisonReport(results)
