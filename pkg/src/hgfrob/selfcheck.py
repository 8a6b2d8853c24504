"""Small invariant suites run by ``hgfrob selfcheck``.

Each suite returns ``(name, passed, detail)``.  The full versions with
their stated tolerances live in the test suite; these are sized to finish
in a few seconds (``quick``) or well under a minute.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Iterator

from .frobenius import assemble, compute_frobenius, euler_factors, validate_commutation
from .gamma import dwork_gamma, dwork_gamma_series_check, morita_gamma, morita_gamma_naive
from .hgdata import build
from .hgseries import (HGOperator, apply_operator, companion_matrix, formal_solution_matrix,
                       gauge_transform, series_solution)
from .padic import PadicContext, embed

Suite = Callable[[bool], tuple[bool, str]]


def _gamma_identities(quick: bool) -> tuple[bool, str]:
    rng = random.Random(1)
    bad = total = 0
    for p in (3, 5, 7):
        ctx = PadicContext(p, 12)
        for _ in range(20 if quick else 100):
            x = Fraction(rng.randrange(-10**6, 10**6), rng.choice([1, 2, 4, 11]))
            g, g1 = morita_gamma(x, ctx), morita_gamma(x + 1, ctx)
            xp = embed(x, ctx)
            want = -g if xp.val > 0 else -xp * g
            x0 = (x.numerator * pow(x.denominator, -1, p)) % p or p
            refl = g * morita_gamma(1 - x, ctx) - embed((-1) ** x0, ctx)
            bad += not (g1 - want).is_zero or not refl.is_zero
            total += 1
        small = PadicContext(p, 3)
        for x in range(0, 40):
            total += 1
            bad += not (morita_gamma(x, small) - morita_gamma_naive(x, small)).is_zero
    return bad == 0, f"{total - bad}/{total} identities"


def _dwork_gamma(quick: bool) -> tuple[bool, str]:
    rng = random.Random(2)
    bad = total = 0
    for p in (3, 5) if quick else (3, 5, 7):
        ctx = PadicContext(p, 6)
        for mu in range(p):
            b = Fraction(rng.randrange(1, 50), rng.choice([2, 4]))
            a = p * b - mu
            ref, digits = dwork_gamma_series_check(a, b, ctx, 40)
            got = dwork_gamma(a, b, ctx)
            diff = got.coeff - ref.coeff
            total += 1
            bad += got.k != ref.k or not (diff.is_zero or diff.val >= min(digits, ctx.prec))
    return bad == 0, f"{total - bad}/{total} agree"


def _annihilation(quick: bool) -> tuple[bool, str]:
    M = 40 if quick else 120
    bad = 0
    cases = [((Fraction(1, 3), Fraction(2, 3)), (Fraction(1, 4), Fraction(3, 4))),
             ((Fraction(1, 2),), (Fraction(0),))]
    for alpha, beta in cases:
        d = build(alpha, beta)
        for k, b in enumerate(d.beta):
            op = HGOperator.from_params([a - b + 1 for a in d.alpha], [x - b + 1 for x in d.beta])
            bad += any(x != 0 for x in apply_operator(op, series_solution(d, k, M)))
    return bad == 0, f"{bad} nonzero residuals"


def _normal_form(quick: bool) -> tuple[bool, str]:
    M = 30 if quick else 60
    d = build([Fraction(1, 3), Fraction(2, 3)], [Fraction(1, 4), Fraction(3, 4)])
    ctx = PadicContext(7, 30)
    S = formal_solution_matrix(d, M, ctx)
    G = gauge_transform(companion_matrix(d, M, ctx), S.U)
    nf = S.normal_form()
    bad = sum(not (G[i, j].coefficient(k) - (nf[i][j] if k == 0 else 0)).is_zero
              for i in range(d.n) for j in range(d.n) for k in range(M - 5))
    return bad == 0, f"{bad} mismatched coefficients"


def _commutation(quick: bool) -> tuple[bool, str]:
    d = build([Fraction(1, 3), Fraction(2, 3)], [Fraction(1, 4), Fraction(3, 4)])
    p, N = 7, 8 if quick else 12
    F = compute_frobenius(d, p, N)
    rep = validate_commutation(F, "global")
    bad = assemble(d, p, N, F.M, F.e, f0=F.f0.scaled(0, 1 + p))
    neg = validate_commutation(bad, "global")
    ok = rep.passed and not neg.passed
    return ok, f"residual {rep.min_valuation}, perturbed {neg.min_valuation}"


def _euler(quick: bool) -> tuple[bool, str]:
    d = build([Fraction(1, 3), Fraction(2, 3)], [Fraction(1, 4), Fraction(3, 4)])
    primes = (5, 7, 11) if quick else (5, 7, 11, 13, 17, 19, 23)
    bad = total = 0
    for p in primes:
        efs, _ = euler_factors(d, p, range(2, p), N=20)
        total += len(efs)
        bad += sum(1 for ef in efs if ef.sign is None or ef.flags)
    return bad == 0, f"{total - bad}/{total} factors pass Weil checks"


SUITES: dict[str, Suite] = {
    "gamma identities": _gamma_identities,
    "dwork gamma series": _dwork_gamma,
    "series annihilation": _annihilation,
    "solution normal form": _normal_form,
    "intertwining residual": _commutation,
    "euler factors": _euler,
}


def run_suites(quick: bool = False) -> Iterator[tuple[str, bool, str]]:
    for name, suite in SUITES.items():
        try:
            ok, detail = suite(quick)
        except Exception as exc:  # a crash is a failed check, not a crashed command
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        yield name, ok, detail
