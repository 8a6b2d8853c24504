"""Frobenius structures F = U F0 sigma(U^{-1}) on the hypergeometric
connection, their specialization at Teichmuller points, and Euler factors.

The Frobenius lift is t -> t^p throughout, so the intertwining relation reads
N' F - p F sigma(N) + D(F) = 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb, floor, log
from typing import Sequence

from .gamma import morita_gamma
from .hgdata import (DataError, HGData, build, is_galois_stable, is_tame, min_zigzag_on_beta,
                     prime_shift, zigzag, zigzag_profile)
from .hgseries import companion_polynomial_matrix, formal_solution_matrix
from .padic import (PadicContext, PadicNumber, PadicSeries, PrecisionError, SeriesMatrix, embed,
                    mat_charpoly, mat_inv, mat_mul, series_derivation_D, series_evaluate,
                    series_mul_by_power, series_mul_poly, series_substitute_frobenius, teichmuller)

log_ = logging.getLogger(__name__)

VARIANTS = ("motivic", "dwork")


def _frac(x: Fraction) -> Fraction:
    return x - floor(x)


# ----------------------------------------------------------------------
# F0


@dataclass(frozen=True)
class F0Matrix:
    """Monomial matrix: ``entries[i] = (j, coeff, t_exponent)`` is the sole nonzero entry of row i."""

    n: int
    entries: tuple[tuple[int, PadicNumber, int], ...]
    variant: str

    def column_of(self, i: int) -> int:
        return self.entries[i][0]

    def scaled(self, i: int, factor) -> "F0Matrix":
        """Copy with the entry of row ``i`` multiplied by ``factor``."""
        ents = list(self.entries)
        j, c, k = ents[i]
        ents[i] = (j, c * factor, k)
        return F0Matrix(self.n, tuple(ents), self.variant)

    def shifted(self, i: int, dk: int) -> "F0Matrix":
        """Copy with the t-exponent of row ``i`` moved by ``dk``.

        In rank one a constant rescaling of F0 rescales F and still
        intertwines, so this is the perturbation that rank one can detect.
        """
        ents = list(self.entries)
        j, c, k = ents[i]
        ents[i] = (j, c, k + dk)
        return F0Matrix(self.n, tuple(ents), self.variant)


def primed_data(d: HGData, p: int) -> HGData:
    """The data ({p alpha}; {p beta}) reduced and sorted."""
    sh = prime_shift(d, p)
    return build(sh.alpha, sh.beta)


def f0_matrix(d: HGData, p: int, ctx: PadicContext, variant: str = "motivic") -> F0Matrix:
    """Initial condition of the Frobenius structure at t = 0.

    Rows follow the sorted primed beta (equal to beta for Galois-stable
    data), columns follow beta.  Row i and column j are linked when
    beta'_i = {p beta_j}.  With Z the zigzag function and Z_min its minimum
    over beta, the motivic entry is

        (-1)^Z(beta'_i) p^(Z(beta_j) - Z_min)
        * prod_k Gamma_p({alpha_k - beta'_i}) / Gamma_p(alpha_k)
        / prod_k Gamma_p({beta_k - beta'_i}) / Gamma_p(beta_k)
        * t^(1 - p + floor(p beta_j)),

    and the Dwork-normalized entry drops the k-independent factors
    p^(-Z_min) prod Gamma_p(beta_k) / prod Gamma_p(alpha_k) and uses the
    primed parameters inside the Gamma quotient.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    n = d.n
    if n == 0:
        return F0Matrix(0, (), variant)
    if d.m != d.n:
        raise DataError("Frobenius structures need m = n")
    if not d.distinct_beta():
        raise DataError("Frobenius assembly needs pairwise distinct beta")
    if not is_tame(d, p):
        raise DataError(f"p={p} is wild for {d}")
    stable = is_galois_stable(d)
    if variant == "motivic" and not stable:
        raise DataError("the motivic normalization needs Galois-stable data")
    dp = primed_data(d, p)
    g = lambda x: morita_gamma(_frac(Fraction(x)), ctx)
    zmin = min_zigzag_on_beta(d)
    rows: list = [None] * n
    for j, b in enumerate(d.beta):
        bp = _frac(p * b)
        i = next(k for k, x in enumerate(dp.beta) if x == bp and rows[k] is None)
        if variant == "motivic":
            num = embed(1, ctx)
            for a in d.alpha:
                num = num * g(a - bp) / g(a)
            den = embed(1, ctx)
            for bk in d.beta:
                den = den * g(bk - bp) / g(bk)
            pexp = zigzag(d, b) - zmin
        else:
            num = embed(1, ctx)
            for a in dp.alpha:
                num = num * g(a - bp)
            den = embed(1, ctx)
            for bk in dp.beta:
                den = den * g(bk - bp)
            pexp = zigzag(d, b)
        sign = -1 if zigzag(d, bp) % 2 else 1
        coeff = num / den * (sign * embed(p, ctx) ** pexp if pexp >= 0 else sign * embed(Fraction(1, p**-pexp), ctx))
        rows[i] = (j, coeff, 1 - p + floor(p * b))
    return F0Matrix(n, tuple(rows), variant)


# ----------------------------------------------------------------------
# assembly


@dataclass(frozen=True)
class Certificate:
    """How far the assembled matrix can be trusted."""

    absprec: int             # p-adic digits known for every coefficient of (t-1)^e F
    tail_window: int         # number of top t-degrees checked
    tail_valuation: float    # smallest valuation seen in that window
    min_valuation: float     # smallest valuation over all coefficients (bounded-coefficient check)
    target: int              # digits requested
    residual_valuation: float | None = None

    @property
    def tail_ok(self) -> bool:
        return self.tail_valuation >= self.target

    @property
    def digits(self) -> int:
        """Digits certified for evaluation at a unit point."""
        return int(min(self.absprec, self.tail_valuation))

    def as_dict(self) -> dict:
        def num(x):
            return None if x is None else (x if x != float("inf") else "inf")
        return {"absprec": self.absprec, "tail_window": self.tail_window,
                "tail_valuation": num(self.tail_valuation), "min_valuation": num(self.min_valuation),
                "target": self.target, "residual_valuation": num(self.residual_valuation)}


@dataclass
class FrobeniusMatrix:
    """(t-1)^e U F0 sigma(U^{-1}) truncated below t^M, with its certificate."""

    data: HGData
    p: int
    ctx: PadicContext
    G: SeriesMatrix
    e: int
    M: int
    f0: F0Matrix
    certificate: Certificate
    target_data: HGData = None  # data whose connection sits on the left (primed data)
    F: SeriesMatrix | None = None  # the uncleared product, same truncation

    @property
    def n(self) -> int:
        return self.data.n


def _tail_stats(G: SeriesMatrix, M: int, W: int) -> tuple[float, float]:
    tail = float("inf")
    low = float("inf")
    p = G.ctx.p
    for row in G.rows:
        for s in row:
            for idx, c in enumerate(s.coeffs):
                if not c:
                    continue
                v = s.shift + _val(c, p)
                low = min(low, v)
                if s.lowest + idx >= M - W:
                    tail = min(tail, v)
    return tail, low


def _val(c: int, p: int) -> int:
    v = 0
    while c % p == 0:
        c //= p
        v += 1
    return v


def default_window(p: int) -> int:
    """Width of the top-degree window that must vanish: a full period in p plus slack."""
    return p + 10


def default_guard(d: HGData, p: int, M: int) -> int:
    """Extra working digits: denominators of U and U^{-1} grow like log_p M."""
    lg = max(1, ceil(log(max(M, 2)) / log(p)))
    return 2 * d.n * lg + (max(zigzag_profile(d).values) - min(zigzag_profile(d).values)) + 4


def assemble(d: HGData, p: int, N: int, M: int, e: int, variant: str = "motivic",
             guard: int | None = None, tail_window: int | None = None,
             f0: F0Matrix | None = None) -> FrobeniusMatrix:
    """Compute (t-1)^e U' F0 sigma(U^{-1}) modulo t^M at N certified digits.

    ``U`` is the rescaled formal solution matrix; ``U'`` is the one for the
    primed data (equal to ``U`` for Galois-stable data).  The product lives
    in Q_p((t)); its lowest exponent is 1 - p + floor(p min beta) and is
    genuinely negative, since sigma multiplies the exponents at 0 by p.
    """
    if guard is None:
        guard = default_guard(d, p, M)
    ctx = PadicContext(p, N + guard)
    if f0 is None:
        f0 = f0_matrix(d, p, ctx, variant)
    n = d.n
    dp = primed_data(d, p)
    W = tail_window if tail_window is not None else default_window(p)
    order_U = M + p
    U = formal_solution_matrix(d, order_U, ctx, rescaled=True, var="t").U
    Up = U if dp == d else formal_solution_matrix(dp, order_U, ctx, rescaled=True, var="t").U
    K = -(-(M + p) // p) + 1
    Uinv = mat_inv(U.map(lambda s: s.truncate(K)))
    sU = Uinv.map(lambda s: series_substitute_frobenius(s, order=p * K))
    # rows of F0 sigma(U^{-1})
    rows = []
    for i in range(n):
        j, c, k = f0.entries[i]
        rows.append([series_mul_by_power(s * c, k, kind="t") for s in sU.rows[j]])
    F = mat_mul(Up, SeriesMatrix(rows))
    G = F.map(lambda s: series_mul_by_power(s, e).truncate(M))
    tail, low = _tail_stats(G, M, W)
    cert = Certificate(G.absprec, W, tail, low, N)
    return FrobeniusMatrix(d, p, ctx, G, e, M, f0, cert, dp, F.map(lambda s: s.truncate(M)))


# ----------------------------------------------------------------------
# specialization and Euler factors


def specialize(F: FrobeniusMatrix, t0: int, digits: int | None = None) -> list[list[PadicNumber]]:
    """Evaluate F at the Teichmuller lift of ``t0``.

    The cleared matrix (t-1)^e F is evaluated and the factor (t-1)^e divided
    back out, which needs t0 != 1 mod p.
    """
    p = F.p
    if t0 % p in (0, 1):
        raise DataError(f"t0={t0} is 0 or 1 mod {p}")
    A = F.certificate.digits if digits is None else digits
    if A < 1:
        raise PrecisionError("no certified digits for evaluation")
    # the point needs extra digits to survive negative shifts in G
    low_shift = min(s.shift for row in F.G.rows for s in row)
    ctx = PadicContext(p, A + max(0, -low_shift) + 1)
    th = teichmuller(t0, ctx)
    scale = (th - 1) ** (-F.e)
    out = []
    for row in F.G.rows:
        out_row = []
        for s in row:
            v = series_evaluate(s.reduce_precision(A), th) * scale
            out_row.append(_cap(v, A))
        out.append(out_row)
    return out


def _cap(x: PadicNumber, A: int) -> PadicNumber:
    """Forget digits at or beyond p^A."""
    if x.is_zero or x.absprec <= A:
        return x if x.absprec <= A else PadicNumber.zero(x.ctx, A)
    if x.val >= A:
        return PadicNumber.zero(x.ctx, A)
    return PadicNumber(x.ctx, x.val, x.unit, A - x.val)


# ----------------------------------------------------------------------
# the intertwining relation


@dataclass(frozen=True)
class CommutationReport:
    mode: str
    min_valuation: float
    threshold: int
    degrees: tuple[int, int]  # range of t-degrees inspected

    @property
    def passed(self) -> bool:
        return self.min_valuation >= self.threshold


def _poly_matrix_int(poly_rows, ctx: PadicContext) -> tuple[list, int]:
    """Clear the (p-unit) denominators of a matrix of linear polynomials."""
    den = 1
    for row in poly_rows:
        for c0, c1 in row:
            for x in (Fraction(c0), Fraction(c1)):
                den = den * x.denominator // _gcd(den, x.denominator)
    if den % ctx.p == 0:
        raise DataError("companion coefficients are not p-integral")
    rows = [[(int(c0 * den), int(c1 * den)) for c0, c1 in row] for row in poly_rows]
    return rows, den


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _pad(s: PadicSeries, extra: int) -> PadicSeries:
    """Read a truncated series as a Laurent polynomial with room for ``extra`` more terms."""
    return PadicSeries(s.ctx, list(s.coeffs) + [0] * extra, s.shift, s.absprec, s.lowest, s.var)


def _series_min_val(s: PadicSeries) -> float:
    return s.min_valuation()


def validate_commutation(F: FrobeniusMatrix, mode: str = "global", guard: int = 2) -> CommutationReport:
    """Residual valuation of N' F - p F sigma(N) + D(F).

    ``mode="window"`` evaluates the relation on the truncated Laurent series
    at t = 0.  It holds for any constant monomial F0 of the right shape, so
    it checks the assembly but not the constants.

    ``mode="global"`` treats G = (t-1)^e F as a Laurent polynomial and checks
    (t^p-1) N~' G - p (t-1) G N~(t^p) + (t^p-1)((t-1) D(G) - e t G) = 0, with
    N~ = (t-1) N.  This holds only if G really is a polynomial modulo p^N,
    i.e. F overconverges, and that pins the relative constants in F0.
    """
    p = F.p
    n = F.n
    target = F.certificate.target
    threshold = target - guard
    if n == 0:
        return CommutationReport(mode, float("inf"), threshold, (0, 0))
    ctx = F.ctx
    left, dl = _poly_matrix_int(companion_polynomial_matrix(F.target_data), ctx)
    right, dr = _poly_matrix_int(companion_polynomial_matrix(F.data), ctx)
    if mode == "window":
        from .hgseries import companion_matrix
        Fm = F.F
        top = Fm.top
        order = top + p
        Nl = companion_matrix(F.target_data, order, ctx, var="t")
        Nr = companion_matrix(F.data, order, ctx, var="t")
        sNr = Nr.map(lambda s: series_substitute_frobenius(s, order=order))
        R = mat_mul(Nl, Fm) - mat_mul(Fm, sNr).map(lambda s: s * p) + Fm.map(series_derivation_D)
        lo = min(s.lowest for row in R.rows for s in row)
        hi = min(s.top for row in R.rows for s in row)
        return CommutationReport(mode, min(_series_min_val(s) for row in R.rows for s in row),
                                 threshold, (lo, hi))
    if mode != "global":
        raise ValueError(f"unknown mode {mode!r}")
    G = F.G.map(lambda s: _pad(s, p + 3))
    e = F.e
    # common denominators dl, dr are p-units; scale every term by dl * dr
    R = []
    for i in range(n):
        R_row = []
        for j in range(n):
            acc = None
            for k in range(n):
                c0, c1 = left[i][k]
                if c0 or c1:
                    # (t^p - 1)(c0 + c1 t) * dr
                    poly = [0] * (p + 2)
                    poly[0] -= c0 * dr
                    poly[1] -= c1 * dr
                    poly[p] += c0 * dr
                    poly[p + 1] += c1 * dr
                    term = series_mul_poly(G.rows[k][j], poly)
                    acc = term if acc is None else acc + term
                c0, c1 = right[k][j]
                if c0 or c1:
                    # -p (t - 1)(c0 + c1 t^p) * dl
                    poly = [0] * (p + 2)
                    poly[0] += p * c0 * dl
                    poly[1] -= p * c0 * dl
                    poly[p] += p * c1 * dl
                    poly[p + 1] -= p * c1 * dl
                    term = series_mul_poly(G.rows[i][k], poly)
                    acc = term if acc is None else acc + term
            g = G.rows[i][j]
            # (t^p - 1)((t - 1) D(g) - e t g) * dl * dr
            inner = series_mul_poly(series_derivation_D(g), [-1, 1]) + series_mul_poly(g, [0, -e])
            poly = [0] * (p + 1)
            poly[0] = -dl * dr
            poly[p] = dl * dr
            term = series_mul_poly(inner, poly)
            acc = term if acc is None else acc + term
            R_row.append(acc)
        R.append(R_row)
    lo = min(s.lowest for row in R for s in row)
    hi = min(s.top for row in R for s in row)
    return CommutationReport(mode, min(_series_min_val(s) for row in R for s in row), threshold, (lo, hi))


# ----------------------------------------------------------------------
# Euler factors


@dataclass(frozen=True)
class EulerFactor:
    """det(1 - Frob T) = sum coeffs[i] T^i."""

    coeffs: tuple[int, ...]
    p: int
    t0: int
    weight: int
    variant: str
    sign: int | None
    digits: int
    exact: bool = True
    flags: tuple[str, ...] = ()

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def as_dict(self) -> dict:
        return {"coeffs": list(self.coeffs), "p": self.p, "t0": self.t0, "weight": self.weight,
                "variant": self.variant, "sign": self.sign, "digits": self.digits,
                "exact": self.exact, "flags": list(self.flags)}


def weil_bound(n: int, i: int, p: int, w: int) -> float:
    return comb(n, i) * p ** (i * w / 2)


def weil_symmetry_check(P: Sequence[int], p: int, w: int, n: int | None = None) -> int | None:
    """Sign eps with c_{n-i} = eps p^{w(n-2i)/2} c_i for all i, or None.

    Equivalently T^n p^{nw/2} P(1/(p^w T)) = eps P(T).
    """
    n = len(P) - 1 if n is None else n
    if len(P) != n + 1:
        return None
    eps = None
    for i in range(n + 1):
        a, b = P[i], P[n - i]
        k = w * (n - 2 * i)
        if k % 2:
            # p^(k/2) is irrational, so only the zero pairing is possible
            if a or b:
                return None
            continue
        lhs = a * p ** (k // 2) if k >= 0 else Fraction(a, p ** (-k // 2))
        if lhs == 0 and b == 0:
            continue
        if lhs == 0 or b == 0:
            return None
        if lhs == b:
            s = 1
        elif lhs == -b:
            s = -1
        else:
            return None
        if eps is None:
            eps = s
        elif eps != s:
            return None
    return eps if eps is not None else 1


def euler_factor(Fspec: Sequence[Sequence[PadicNumber]], d: HGData, p: int, t0: int,
                 variant: str = "motivic", calibration: int = 1) -> EulerFactor:
    """Reverse characteristic polynomial of the specialized Frobenius.

    In the motivic normalization each coefficient is rounded to the unique
    integer inside the Weil window, which needs p^digits > 2 * bound.
    ``calibration`` rescales T (a global normalization constant, default 1).
    """
    from .hgdata import weight as _weight
    n = d.n
    w = _weight(d)
    if variant == "motivic" and not is_galois_stable(d):
        raise DataError("the motivic normalization needs Galois-stable data")
    cp = mat_charpoly(Fspec) if n else []
    vals = [embed(1, Fspec[0][0].ctx) if n else None] + list(cp[1:])
    vals = [v * calibration**i for i, v in enumerate(vals)] if n else []
    digits = min((v.absprec for v in vals[1:]), default=0)
    flags = []
    if variant != "motivic":
        coeffs = tuple(v.lift_symmetric() if v.val >= 0 else 0 for v in vals) if n else (1,)
        if any(v.val < 0 for v in vals):
            flags.append("non-integral coefficient")
        return EulerFactor(coeffs or (1,), p, t0, w, variant, None, digits, False, tuple(flags))
    coeffs = [1]
    for i, v in enumerate(vals[1:], start=1):
        bound = weil_bound(n, i, p, w)
        if p ** v.absprec <= 2 * bound:
            raise PrecisionError(f"coefficient {i} known to {v.absprec} digits; "
                                 f"the Weil window needs p^digits > {2 * bound:.0f}")
        if v.val < 0:
            raise PrecisionError(f"coefficient {i} is not integral (valuation {v.val})")
        c = v.lift_symmetric()
        if abs(c) > bound:
            flags.append(f"c{i}={c} exceeds the Weil bound")
        coeffs.append(c)
    sign = weil_symmetry_check(coeffs, p, w, n)
    if sign is None:
        flags.append("Weil symmetry fails")
    return EulerFactor(tuple(coeffs), p, t0, w, variant, sign, digits, True, tuple(flags))


# ----------------------------------------------------------------------
# truncation choice


class TruncationError(PrecisionError):
    """The escalation cap was reached before the certificates passed."""


def choose_truncations(d: HGData, p: int, N: int) -> tuple[int, int]:
    """Starting (M, e).

    The clearing exponent has to grow like p * N: the pole of F at t = 1
    contributes terms of valuation k with pole order about k p.  The
    polynomial part of (t-1)^e F ends near degree e + p, and the top window
    of width ``default_window(p)`` has to sit beyond it.
    """
    e = ceil(p * (0.8 * N + 2))
    M = e + 2 * p + default_window(p)
    return M, e


def compute_frobenius(d: HGData, p: int, N: int, variant: str = "motivic", M: int | None = None,
                      e: int | None = None, max_escalations: int = 4, guard: int | None = None,
                      check: bool = True) -> FrobeniusMatrix:
    """Assemble with escalating truncations until the certificates pass.

    Passing means: N digits known, the top window vanishes mod p^N, and
    (with ``check``) the global intertwining residual is at least N - 2.
    """
    M0, e0 = choose_truncations(d, p, N)
    e = e0 if e is None else e
    M = max(M0, e + 2 * p + default_window(p)) if M is None else M
    history = []
    for attempt in range(max_escalations + 1):
        F = assemble(d, p, N, M, e, variant, guard=guard)
        cert = F.certificate
        problems = []
        if cert.absprec < N:
            problems.append(f"absprec {cert.absprec} < {N}")
        if not cert.tail_ok:
            problems.append(f"tail valuation {cert.tail_valuation} < {N}")
        if not problems and check:
            rep = validate_commutation(F, "global")
            F.certificate = Certificate(cert.absprec, cert.tail_window, cert.tail_valuation,
                                        cert.min_valuation, cert.target, rep.min_valuation)
            if not rep.passed:
                problems.append(f"residual valuation {rep.min_valuation} < {rep.threshold}")
        if not problems:
            return F
        history.append((M, e, problems))
        log_.info("p=%d M=%d e=%d rejected: %s", p, M, e, "; ".join(problems))
        if attempt == max_escalations:
            break
        e = ceil(1.3 * e) + p
        M = e + 2 * p + default_window(p)
        if guard is not None and cert.absprec < N:
            guard += 4
    detail = "; ".join(f"(M={m}, e={ee}): {', '.join(pr)}" for m, ee, pr in history)
    raise TruncationError(f"no certified Frobenius matrix for p={p}, N={N} after "
                          f"{max_escalations} escalations: {detail}")


def euler_factors(d: HGData, p: int, t0s: Sequence[int], N: int = 20, variant: str = "motivic",
                  M: int | None = None, e: int | None = None, calibration: int = 1,
                  max_escalations: int = 4) -> tuple[list[EulerFactor], FrobeniusMatrix]:
    """Euler factors at several residues t0 from a single Frobenius matrix."""
    F = compute_frobenius(d, p, N, variant, M, e, max_escalations)
    out = []
    for t0 in t0s:
        A = specialize(F, t0)
        out.append(euler_factor(A, d, p, t0, variant, calibration))
    return out, F
