"""Command-line interface.

Exit codes: 0 success, 1 validation error, 2 precision failure,
3 comparison mismatch.  Results go to stdout (JSON lines by default,
``--format table`` for people); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .frobenius import VARIANTS, TruncationError, euler_factors
from .gamma import morita_gamma
from .hgdata import (DataError, HGData, build, good_primes, is_good, local_exponents, parse_params,
                     weight, wild_primes, zigzag_profile)
from .oracle import ComparisonConfig, FixtureError, load_fixtures, run_comparisons
from .padic import PadicContext, PrecisionError, is_prime

EXIT_OK, EXIT_INVALID, EXIT_PRECISION, EXIT_MISMATCH = 0, 1, 2, 3
JOBS_ENV = "HGFROB_JOBS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags, which would read as a precision failure
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    alpha: str
    beta: str
    t: Fraction
    p: int | None = None
    X: int | None = None
    N: int = 20
    M: int | None = None
    e: int | None = None
    variant: str = "motivic"
    fmt: str = "json"
    jobs: int = 1

    def __post_init__(self):
        if (self.p is None) == (self.X is None):
            raise DataError("exactly one of p and X must be given")
        if self.N < 1:
            raise DataError("N must be at least 1")
        if self.variant not in VARIANTS:
            raise DataError(f"variant must be one of {VARIANTS}")
        if self.jobs < 1:
            raise DataError("parallelism must be at least 1")

    @property
    def data(self) -> HGData:
        return build(parse_params(self.alpha), parse_params(self.beta))


def _default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise DataError(f"{JOBS_ENV} must be an integer, got {raw!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise DataError(f"cannot parse {text!r} as a rational") from None


def _emit(rows: list[dict], fmt: str, columns: list[str]) -> None:
    if fmt == "json":
        for r in rows:
            print(json.dumps(r))
        return
    cells = [[_cell(r.get(c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[k]) for row in cells]) for k, c in enumerate(columns)]
    print("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip())
    for row in cells:
        print("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip())


def _cell(v) -> str:
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(str(x) for x in v) + "]"
    if isinstance(v, dict):
        return ",".join(f"{k}={v[k]}" for k in v)
    return "" if v is None else str(v)


# ----------------------------------------------------------------------
# commands


def cmd_data(args) -> int:
    d = build(parse_params(args.alpha), parse_params(args.beta))
    prof = zigzag_profile(d)
    row = {"alpha": [str(a) for a in d.alpha], "beta": [str(b) for b in d.beta],
           "zigzag_breaks": [str(b) for b in prof.breaks], "zigzag_values": list(prof.values),
           "weight": weight(d), "wild_primes": wild_primes(d)}
    if d.m == d.n:
        le = local_exponents(d)
        row["exponents"] = {"0": [str(x) for x in le.zero], "1": [str(x) for x in le.one],
                            "inf": [str(x) for x in le.infinity]}
    _emit([row], args.format, ["alpha", "beta", "zigzag_values", "weight", "wild_primes"])
    return EXIT_OK


def cmd_gamma(args) -> int:
    if not is_prime(args.p):
        raise DataError(f"p={args.p} is not prime")
    if args.prec < 1:
        raise DataError("precision must be at least 1")
    x = _rational(args.x)
    if x.denominator % args.p == 0:
        raise DataError(f"x={x} is not a p-adic integer")
    ctx = PadicContext(args.p, args.prec)
    g = morita_gamma(x, ctx)
    _emit([{"p": args.p, "x": str(x), "prec": args.prec, "value": g.residue(args.prec)}],
          args.format, ["p", "x", "prec", "value"])
    return EXIT_OK


def _euler_rows(cfg: RunConfig, p: int) -> list[dict]:
    d = cfg.data
    t0 = cfg.t.numerator * pow(cfg.t.denominator, -1, p) % p
    efs, F = euler_factors(d, p, [t0], cfg.N, cfg.variant, cfg.M, cfg.e)
    cert = dict(F.certificate.as_dict(), M=F.M, e=F.e)
    ef = efs[0]
    return [{"alpha": [str(a) for a in d.alpha], "beta": [str(b) for b in d.beta], "p": p,
             "t": str(cfg.t), "t0": t0, "coeffs": list(ef.coeffs), "variant": cfg.variant,
             "weight": ef.weight, "sign": ef.sign, "exact": ef.exact, "flags": list(ef.flags),
             "certificate": cert}]


_EULER_COLUMNS = ["p", "t", "coeffs", "sign", "flags"]


def _config(args, p=None, X=None) -> RunConfig:
    return RunConfig(args.alpha, args.beta, _rational(args.t), p, X, args.prec, args.M, args.e,
                     args.variant, args.format, args.jobs if args.jobs is not None else _default_jobs())


def cmd_euler(args) -> int:
    cfg = _config(args, p=args.p)
    d = cfg.data
    if not is_good(d, cfg.p, cfg.t):
        raise DataError(f"p={cfg.p} is not a good tame odd prime for t={cfg.t}")
    _emit(_euler_rows(cfg, cfg.p), cfg.fmt, _EULER_COLUMNS)
    return EXIT_OK


def _sweep_one(task):
    cfg, p = task
    try:
        return p, _euler_rows(cfg, p), None
    except (PrecisionError, TruncationError) as exc:
        return p, [], str(exc)


def cmd_sweep(args) -> int:
    cfg = _config(args, X=args.X)
    primes = good_primes(cfg.data, cfg.t, cfg.X)
    tasks = [(cfg, p) for p in primes]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_sweep_one, tasks))
    else:
        results = [_sweep_one(t) for t in tasks]
    results.sort(key=lambda r: r[0])
    rows, failed = [], []
    for p, rs, err in results:
        rows.extend(rs)
        if err:
            failed.append(p)
            print(f"p={p}: {err}", file=sys.stderr)
    _emit(rows, cfg.fmt, _EULER_COLUMNS)
    return EXIT_PRECISION if failed else EXIT_OK


def cmd_selfcheck(args) -> int:
    from .selfcheck import run_suites
    ok = True
    for name, passed, detail in run_suites(quick=args.quick):
        ok &= passed
        print(f"{'ok  ' if passed else 'FAIL'} {name}: {detail}")
    return EXIT_OK if ok else EXIT_PRECISION


def cmd_compare(args) -> int:
    fixtures = load_fixtures(args.fixtures)
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    report = run_comparisons(fixtures, ComparisonConfig(N=args.prec, jobs=jobs))
    rows = []
    for r in report.results:
        fx = r.fixture
        row = {"alpha": [str(a) for a in fx.alpha], "beta": [str(b) for b in fx.beta], "p": fx.p,
               "t": str(fx.t), "convention": fx.convention, "expected": list(fx.coeffs),
               "computed": None if r.computed is None else list(r.computed), "passed": r.passed}
        if not r.passed:
            row["error"] = r.error
            row["certificate"] = r.certificate
        rows.append(row)
    _emit(rows, args.format, ["p", "t", "expected", "computed", "passed"])
    print(report.summary(), file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_MISMATCH


# ----------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hgfrob", description="Frobenius structures and Euler factors of hypergeometric motives.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log escalations to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, params=True):
        p.add_argument("--format", choices=("json", "table"), default="json")
        if params:
            p.add_argument("--alpha", required=True, help="comma-separated fractions, e.g. 1/3,2/3")
            p.add_argument("--beta", required=True)

    def run_flags(p):
        p.add_argument("--t", required=True, help="rational specialization parameter")
        p.add_argument("--prec", type=int, default=20, help="p-adic digits N")
        p.add_argument("--M", type=int, default=None, help="series truncation (default: automatic)")
        p.add_argument("--e", type=int, default=None, help="clearing exponent (default: automatic)")
        p.add_argument("--variant", choices=VARIANTS, default="motivic")
        p.add_argument("--jobs", type=int, default=None, help=f"worker processes (default: ${JOBS_ENV} or 1)")

    p = sub.add_parser("data", help="zigzag profile, weight, wild primes, local exponents")
    common(p)
    p.set_defaults(func=cmd_data)

    p = sub.add_parser("gamma", help="Morita's p-adic gamma function")
    common(p, params=False)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--prec", type=int, default=20)
    p.add_argument("--x", required=True, help="a rational p-adic integer")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("euler", help="Euler factor at one prime")
    common(p)
    run_flags(p)
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("sweep", help="Euler factors at all good primes up to X")
    common(p)
    run_flags(p)
    p.add_argument("--X", type=int, required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selfcheck", help="run the invariant suites")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_selfcheck)

    p = sub.add_parser("compare", help="compare against a fixture file")
    common(p, params=False)
    p.add_argument("--fixtures", required=True)
    p.add_argument("--prec", type=int, default=20)
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (DataError, FixtureError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PrecisionError as exc:
        print(f"precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
