"""Hypergeometric series, the operator P(alpha; beta), its companion
connection and the formal solution matrix at z = 0.

Coefficient arithmetic is generic: the routines run over exact ``Fraction``
values (``ring=None``) or over :class:`~hgfrob.padic.PadicNumber` values
(``ring`` a PadicContext).  Exact mode is the cross-check oracle; p-adic mode
is what the Frobenius pipeline uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .hgdata import DataError, HGData
from .padic import (PadicContext, PadicNumber, PadicSeries, SeriesMatrix, embed, mat_inv,
                    mat_mul, series_derivation_D)


def _lift(x, ring):
    return Fraction(x) if ring is None else embed(x, ring)


def _is_zero(x) -> bool:
    return x.is_zero if isinstance(x, PadicNumber) else x == 0


def pochhammer(x, k: int):
    """Rising factorial (x)_k = x (x+1) ... (x+k-1)."""
    if k < 0:
        raise ValueError("negative Pochhammer index")
    out = embed(1, x.ctx) if isinstance(x, PadicNumber) else Fraction(1)
    for i in range(k):
        out = out * (x + i)
    return out


def clausen_thomae_coeffs(alphas: Sequence, betas: Sequence, M: int, ring=None) -> list:
    """First ``M`` coefficients of sum_k prod (alpha)_k / prod (beta)_k * z^k / k!."""
    a = [_lift(x, ring) for x in alphas]
    b = [_lift(x, ring) for x in betas]
    A = _lift(1, ring)
    out = []
    for k in range(M):
        out.append(A)
        num = _lift(1, ring)
        for x in a:
            num = num * (x + k)
        den = _lift(k + 1, ring)
        for x in b:
            if _is_zero(x + k):
                raise DataError(f"denominator parameter {x} is a nonpositive integer")
            den = den * (x + k)
        A = A * num / den
    return out


# ----------------------------------------------------------------------
# the operator


def _poly_from_roots(shifts: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients (ascending in D) of prod (D + s)."""
    c = [Fraction(1)]
    for s in shifts:
        nxt = [Fraction(0)] * (len(c) + 1)
        for i, x in enumerate(c):
            nxt[i] += s * x
            nxt[i + 1] += x
        c = nxt
    return c


@dataclass(frozen=True)
class HGOperator:
    """P = z prod (D + alpha_i) - prod (D + beta_j - 1) as sum_i (c0_i + c1_i z) D^i."""

    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]
    c0: tuple[Fraction, ...]
    c1: tuple[Fraction, ...]

    @classmethod
    def from_params(cls, alpha: Sequence, beta: Sequence) -> "HGOperator":
        alpha = tuple(Fraction(a) for a in alpha)
        beta = tuple(Fraction(b) for b in beta)
        if len(alpha) > len(beta):
            raise DataError("need m <= n")
        s = _poly_from_roots(alpha)
        r = _poly_from_roots([b - 1 for b in beta])
        n = len(beta)
        s += [Fraction(0)] * (n + 1 - len(s))
        return cls(alpha, beta, tuple(-x for x in r), tuple(s))

    @classmethod
    def from_data(cls, d: HGData) -> "HGOperator":
        return cls.from_params(d.alpha, d.beta)

    @property
    def order(self) -> int:
        return len(self.beta)

    def leading(self) -> tuple[Fraction, Fraction]:
        """Coefficient of D^n as (constant, z-coefficient)."""
        return self.c0[-1], self.c1[-1]


def apply_operator(op: HGOperator, f: Sequence, M: int | None = None, method: str = "expanded") -> list:
    """P(f) for a power series given by its coefficient list, truncated at z^M.

    ``method="expanded"`` uses the D-polynomial coefficients; ``"factored"``
    applies the linear factors one at a time and is an independent route.
    """
    M = len(f) if M is None else min(M, len(f))
    f = list(f[:M])
    if method == "expanded":
        out = []
        for k in range(M):
            acc = 0
            for i in range(op.order + 1):
                acc = acc + op.c0[i] * k**i * f[k]
                if k and op.c1[i]:
                    acc = acc + op.c1[i] * (k - 1) ** i * f[k - 1]
            out.append(acc)
        return out
    if method == "factored":
        g = f
        for a in op.alpha:
            g = [(k + a) * x for k, x in enumerate(g)]
        left = [0 * f[0]] + g[:M - 1]
        h = f
        for b in op.beta:
            h = [(k + b - 1) * x for k, x in enumerate(h)]
        return [x - y for x, y in zip(left, h)]
    raise ValueError(f"unknown method {method!r}")


def series_solution(d: HGData, k: int, M: int, ring=None) -> list:
    """Coefficients of the series solution attached to beta_k (distinct beta).

    This is the hypergeometric series with upper parameters alpha_i - beta_k + 1
    and lower parameters beta_j - beta_k + 1 for j != k.
    """
    bk = d.beta[k]
    ups = [a - bk + 1 for a in d.alpha]
    downs = [b - bk + 1 for j, b in enumerate(d.beta) if j != k]
    return clausen_thomae_coeffs(ups, downs, M, ring)


# ----------------------------------------------------------------------
# companion connection


def companion_polynomial_matrix(d: HGData) -> list[list[tuple[Fraction, Fraction]]]:
    """(z - 1) N as a matrix of linear polynomials (constant, z-coefficient)."""
    if d.m != d.n:
        raise DataError("the companion connection needs m = n")
    op = HGOperator.from_data(d)
    n = d.n
    zero = (Fraction(0), Fraction(0))
    rows = [[zero] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = (Fraction(1), Fraction(-1))
    rows[n - 1] = [(op.c0[i], op.c1[i]) for i in range(n)]
    return rows


def companion_matrix(d: HGData, M: int, ring: PadicContext | None = None, var: str = "z"):
    """Companion matrix N with 1/(z - 1) expanded at z = 0, truncated at z^M.

    Horizontal sections of D + N are the vectors (f, Df, ..., D^{n-1} f) for
    solutions f of P.  Returns a SeriesMatrix, or nested coefficient lists in
    exact mode.
    """
    poly = companion_polynomial_matrix(d)
    # (c0 + c1 z) / (z - 1) = -c0 - (c0 + c1)(z + z^2 + ...)
    rows = [[[-c0] + [-(c0 + c1)] * (M - 1) for (c0, c1) in row] for row in poly]
    if ring is None:
        return rows
    return SeriesMatrix([[PadicSeries.from_padics(e, ring, var=var) for e in row] for row in rows])


def residue_matrix(d: HGData) -> list[list[Fraction]]:
    """N(0), the residue of the companion connection at z = 0."""
    return [[-c0 for (c0, _c1) in row] for row in companion_polynomial_matrix(d)]


# ----------------------------------------------------------------------
# formal solution matrix


def beta_blocks(beta: Sequence[Fraction]) -> list[tuple[int, int]]:
    """(start index, multiplicity) of each run of equal values in sorted beta."""
    out: list[tuple[int, int]] = []
    for i, b in enumerate(beta):
        if i and beta[i - 1] == b:
            s, mu = out[-1]
            out[-1] = (s, mu + 1)
        else:
            out.append((i, 1))
    return out


def _epsilon_series(ups, downs, mu: int, M: int, ring) -> list[list]:
    """[eps^j] of prod (u + eps)_k / prod (v + eps)_k for j < mu, k < M.

    Returned as ``cols[j][k]``.  Arithmetic is in R[eps]/(eps^mu).
    """
    one = _lift(1, ring)
    zero = one * 0
    c = [one] + [zero] * (mu - 1)
    cols = [[] for _ in range(mu)]
    for k in range(M):
        for j in range(mu):
            cols[j].append(c[j])
        for u in ups:
            a = u + k
            c = [a * c[0]] + [a * c[j] + c[j - 1] for j in range(1, mu)]
        for v in downs:
            b = v + k
            if _is_zero(b):
                raise DataError(f"denominator parameter {v} is a nonpositive integer")
            q = [c[0] / b]
            for j in range(1, mu):
                q.append((c[j] - q[j - 1]) / b)
            c = q
    return cols


def _apply_shifted_D(f: list, c, power: int) -> list:
    """(D + c)^power on a coefficient list."""
    out = f
    for _ in range(power):
        out = [(k + c) * x for k, x in enumerate(out)]
    return out


def rescale_factor(d: HGData, k: int) -> Fraction:
    """prod (alpha_i - beta_k)_+ / prod (beta_j - beta_k)_+ with (x)_+ = x if x > 0 else 1."""
    def plus(x):
        return x if x > 0 else Fraction(1)
    num = Fraction(1)
    for a in d.alpha:
        num *= plus(a - d.beta[k])
    den = Fraction(1)
    for b in d.beta:
        den *= plus(b - d.beta[k])
    return num / den


@dataclass(frozen=True)
class SolutionMatrix:
    U: object  # SeriesMatrix, or nested lists of Fractions in exact mode
    blocks: tuple[tuple[int, int], ...]
    beta: tuple[Fraction, ...]
    rescaled: bool

    def normal_form(self) -> list[list[Fraction]]:
        """The constant block matrix U is expected to gauge N into."""
        n = len(self.beta)
        out = [[Fraction(0)] * n for _ in range(n)]
        for start, mu in self.blocks:
            b = self.beta[start]
            for i in range(mu):
                out[start + i][start + i] = b - 1
                if i + 1 < mu:
                    out[start + i][start + i + 1] = Fraction(-(i + 1))
        return out


def formal_solution_matrix(d: HGData, M: int, ring: PadicContext | None = None,
                           rescaled: bool = False, var: str = "z") -> SolutionMatrix:
    """Formal solution matrix U at z = 0, truncated at z^M.

    For a block of beta equal to b with multiplicity mu, the series
    f_{s+j} = j! [eps^j] sum_k prod (alpha_i - b + 1 + eps)_k /
    prod_j (beta_j - b + 1 + eps)_k z^k enter column s+j through
    U[i][s+j] = sum_k j! i! / (k! (j-k)! (i-j+k)!) (D + 1 - b)^{i-j+k} f_{s+k}
    (rows indexed from 0).  With distinct beta this is (D + 1 - beta_k)^i f_k.

    The factor j! (rather than 1/j!) in f is what makes column s+j the j-th
    eps-derivative of the vector (D + 1 - b + eps)^i applied to the deformed
    series; the two normalizations only agree for mu <= 2.
    """
    n = d.n
    blocks = beta_blocks(d.beta)
    cols: list[list[list]] = [None] * n  # cols[c][i] = coefficient list
    for start, mu in blocks:
        b = d.beta[start]
        ups = [_lift(a - b + 1, ring) for a in d.alpha]
        downs = [_lift(x - b + 1, ring) for x in d.beta]
        eps = _epsilon_series(ups, downs, mu, M, ring)
        f = [[factorial(j) * x for x in eps[j]] for j in range(mu)]
        shift = _lift(1 - b, ring)
        for j in range(mu):
            col = []
            for i in range(n):
                acc = None
                for k in range(max(0, j - i), j + 1):
                    coef = factorial(j) * factorial(i) // (factorial(k) * factorial(j - k) * factorial(i - j + k))
                    term = [coef * x for x in _apply_shifted_D(f[k], shift, i - j + k)]
                    acc = term if acc is None else [x + y for x, y in zip(acc, term)]
                col.append(acc)
            if rescaled:
                r = _lift(rescale_factor(d, start + j), ring)
                col = [[r * x for x in e] for e in col]
            cols[start + j] = col
    if ring is None:
        U = [[cols[c][i] for c in range(n)] for i in range(n)]
    else:
        U = SeriesMatrix([[PadicSeries.from_padics(cols[c][i], ring, var=var) for c in range(n)]
                          for i in range(n)])
    return SolutionMatrix(U, tuple(blocks), d.beta, rescaled)


def gauge_transform(N: SeriesMatrix, U: SeriesMatrix) -> SeriesMatrix:
    """N_U = U^{-1} N U + U^{-1} D(U)."""
    Uinv = mat_inv(U)
    DU = U.map(series_derivation_D)
    return mat_mul(Uinv, mat_mul(N, U) + DU)
