"""Morita's p-adic gamma function, Dwork's gamma symbol and the Dwork exponential."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .padic import PadicContext, PadicNumber, PrecisionError, embed, rational_valuation


def _as_fraction(x) -> Fraction:
    if isinstance(x, PadicNumber):
        raise TypeError("pass exact rationals to the gamma functions")
    return Fraction(x)


def _integer_surrogate(x, p: int, digits: int) -> int:
    """The integer in ``[0, p**digits)`` congruent to ``x``."""
    x = _as_fraction(x)
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not in Z_({p})")
    m = p**digits
    return x.numerator * pow(x.denominator, -1, m) % m


def morita_gamma_naive(x, ctx: PadicContext) -> PadicNumber:
    """Gamma_p(x) mod p^N from the defining product; O(p^N) multiplications.

    Only practical for tiny ``p**N``; kept as an independent oracle.
    """
    p, m = ctx.p, ctx.modulus
    M = _integer_surrogate(x, p, ctx.prec)
    acc = 1
    for j in range(1, M):
        if j % p:
            acc = acc * j % m
    if M % 2:
        acc = -acc
    return PadicNumber.from_int_mod(ctx, acc, ctx.prec)


@lru_cache(maxsize=64)
def _bernoulli(n: int) -> tuple[Fraction, ...]:
    """B_0..B_n with B_1 = -1/2."""
    B = [Fraction(1)]
    for k in range(1, n + 1):
        B.append(-sum(math.comb(k + 1, j) * B[j] for j in range(k)) / (k + 1))
    return tuple(B)


@lru_cache(maxsize=64)
def _block_log_polynomial(p: int, W: int) -> tuple[int, int, tuple[int, ...]]:
    """Coefficients tau_j with sum_{q<Q} log(h(q)/h(0)) = sum_j tau_j Q^j mod p^W.

    Here h(q) = prod_{r=1}^{p-1} (p q + r) is the product over one block of
    integers prime to p.  Valid for every integer Q >= 0.
    """
    lg = max(1, math.ceil(math.log(W + 8, p)))
    D = W + 2 * lg + 3  # q-degree and log-series cutoff
    K = W + 3 * lg + 8  # digits carried by the integer representatives
    mod = p**K
    # h(q) = sum_m e_m p^m q^m
    h = [1]
    for r in range(1, p):
        nxt = [0] * (len(h) + 1)
        for i, c in enumerate(h):
            nxt[i] += c * r
            nxt[i + 1] += c * p
        h = nxt
    h0inv = pow(h[0], -1, mod)
    u = [0] + [c * h0inv % mod for c in h[1:D + 1]]
    u += [0] * (D + 1 - len(u))

    def trunc_mul(a, b):
        out = [0] * (D + 1)
        for i, x in enumerate(a):
            if x:
                for j in range(D + 1 - i):
                    if b[j]:
                        out[i + j] += x * b[j]
        return [c % mod for c in out]

    # log(1 + u) = sum_s (-1)^(s+1) u^s / s
    log_coeffs = [Fraction(0)] * (D + 1)
    power = u
    for s in range(1, D + 1):
        sign = 1 if s % 2 else -1
        for m in range(D + 1):
            if power[m]:
                log_coeffs[m] += Fraction(sign * power[m], s)
        power = trunc_mul(power, u)
    # sum_{q<Q} q^m via Faulhaber
    B = _bernoulli(D + 1)
    tau = [Fraction(0)] * (D + 2)
    for m, lm in enumerate(log_coeffs):
        if lm == 0:
            continue
        if m == 0:
            tau[1] += lm
            continue
        for k in range(m + 1):
            tau[m + 1 - k] += lm * math.comb(m + 1, k) * B[k] / (m + 1)
    # fixed-point form: tau_j = ints_j / p^a, ints_j known mod p^K
    a = max(0, -min(rational_valuation(c, p) for c in tau if c))
    ints = tuple((c.numerator * p**a) * pow(c.denominator, -1, mod) % mod for c in tau)
    return a, K, ints


def _padic_exp_int(t1: int, p: int, W: int) -> int:
    """exp(p * t1) mod p^W for an integer t1."""
    mod = p**W
    kmax = (W * (p - 1)) // (p - 2) + 3
    acc = 0
    tpow = 1
    fact_unit = 1  # k! with its p-part removed
    vfact = 0
    for k in range(kmax + 1):
        if k:
            kk = k
            while kk % p == 0:
                kk //= p
                vfact += 1
            fact_unit = fact_unit * kk % mod
            tpow = tpow * t1 % mod
        e = k - vfact
        if e < W:
            acc += p**e * tpow * pow(fact_unit, -1, mod)
    return acc % mod


def morita_gamma(x, ctx: PadicContext) -> PadicNumber:
    """Gamma_p(x) mod p^N for x in Z_(p).

    Uses Gamma_p(x) == Gamma_p(M) mod p^N for the integer surrogate M of x,
    and evaluates the product over complete blocks of p consecutive integers
    through a cached logarithm polynomial in the number of blocks.
    """
    p, N = ctx.p, ctx.prec
    M = _integer_surrogate(x, p, N)
    W = N + 2
    mod = p**W
    Q, R = divmod(M, p)
    a, K, ints = _block_log_polynomial(p, W)
    big = p**K
    acc = 0
    for c in reversed(ints):
        acc = (acc * Q + c) % big
    # acc = p^a * T with v(T) >= 1
    if acc % p ** (a + 1):
        raise ArithmeticError("block logarithm is not divisible by p")
    t1 = acc // p ** (a + 1)
    val = pow(math.factorial(p - 1), Q, mod) * _padic_exp_int(t1, p, W) % mod
    for r in range(1, R):
        val = val * (Q * p + r) % mod
    if M % 2:
        val = -val
    return PadicNumber.from_int_mod(ctx, val, N)


# ----------------------------------------------------------------------
# pi-adic bookkeeping


class PiElement:
    """``pi**k * coeff`` with ``pi**(p-1) = -p`` and ``0 <= k <= p-2``."""

    __slots__ = ("k", "coeff")

    def __init__(self, k: int, coeff: PadicNumber):
        p = coeff.ctx.p
        q, k = divmod(k, p - 1)
        if q:
            coeff = coeff * embed(-p, coeff.ctx) ** q
        self.k = k
        self.coeff = coeff

    @property
    def ctx(self) -> PadicContext:
        return self.coeff.ctx

    @classmethod
    def pi_power(cls, k: int, ctx: PadicContext) -> "PiElement":
        return cls(k, embed(1, ctx))

    def __mul__(self, other):
        if isinstance(other, PiElement):
            return PiElement(self.k + other.k, self.coeff * other.coeff)
        return PiElement(self.k, self.coeff * other)

    __rmul__ = __mul__

    def __add__(self, other: "PiElement"):
        if self.coeff.is_zero:
            return PiElement(other.k, other.coeff + PadicNumber.zero(self.ctx, self.coeff.val))
        if other.coeff.is_zero:
            return PiElement(self.k, self.coeff + PadicNumber.zero(self.ctx, other.coeff.val))
        if self.k != other.k:
            raise ValueError("adding pi-elements with different pi exponents")
        return PiElement(self.k, self.coeff + other.coeff)

    def __neg__(self):
        return PiElement(self.k, -self.coeff)

    def inverse(self) -> "PiElement":
        # pi^-k = pi^(p-1-k) / pi^(p-1) = pi^(p-1-k) / (-p)
        p = self.ctx.p
        if self.k == 0:
            return PiElement(0, self.coeff.inverse())
        return PiElement(p - 1 - self.k, self.coeff.inverse() / embed(-p, self.ctx))

    def __truediv__(self, other):
        if isinstance(other, PiElement):
            return self * other.inverse()
        return PiElement(self.k, self.coeff / other)

    def __pow__(self, e: int):
        base = self if e >= 0 else self.inverse()
        out = PiElement(0, embed(1, self.ctx))
        for _ in range(abs(e)):
            out = out * base
        return out

    def __eq__(self, other):
        if not isinstance(other, PiElement):
            return NotImplemented
        if self.coeff.is_zero or other.coeff.is_zero:
            return (self.coeff - other.coeff).is_zero
        return self.k == other.k and self.coeff == other.coeff

    __hash__ = None

    def valuation(self) -> float:
        """Valuation in Q_p(pi), normalized by v(p) = 1."""
        p = self.ctx.p
        return self.coeff.valuation() + Fraction(self.k, p - 1)

    def __repr__(self):
        return f"pi^{self.k} * ({self.coeff!r})"


def pochhammer_rational(x, k: int) -> Fraction:
    """Rising factorial (x)_k for integer k; negative k means 1/(x+k)_(-k)."""
    x = Fraction(x)
    out = Fraction(1)
    if k >= 0:
        for i in range(k):
            out *= x + i
        return out
    for i in range(1, -k + 1):
        d = x - i
        if d == 0:
            raise ZeroDivisionError(f"Pochhammer ({x})_{k} has a zero denominator factor")
        out /= d
    return out


def dwork_gamma(a, b, ctx: PadicContext) -> PiElement:
    """Dwork's gamma_p(a, b) for a, b in Z_(p) with p*b - a an integer.

    Shifts ``a`` by an integer so that p*b - a lands in {0, ..., p-1}, where
    gamma_p(a, b) = pi^mu Gamma_p(a), then undoes the shift with the
    functional equation.
    """
    a, b = Fraction(a), Fraction(b)
    p = ctx.p
    mu = p * b - a
    if mu.denominator != 1:
        raise ValueError(f"p*b - a = {mu} is not an integer")
    mu = int(mu)
    mu0 = mu % p
    s = mu0 - mu  # a = a0 + s
    a0 = a - s
    base = PiElement(mu0, morita_gamma(a0, ctx))
    # gamma(a0 + s, b) = gamma(a0, b) * (-pi)^(-s) * (a0)_s
    factor = embed(pochhammer_rational(a0, s), ctx)
    return base * PiElement(-s, embed((-1) ** (s % 2), ctx)) * factor


def dwork_exp_coeff_rational(j: int, p: int) -> Fraction:
    """c_j / pi^j for the Dwork exponential exp(pi (t - t^p))."""
    return sum((Fraction(1, p**k * math.factorial(j - p * k) * math.factorial(k))
                for k in range(j // p + 1)), Fraction(0))


def dwork_exp_coeffs(ctx: PadicContext, J: int) -> list[PiElement]:
    """Coefficients c_0..c_J of exp(pi (t - t^p)) as pi-elements.

    Each coefficient is checked against the radius-of-convergence bound
    v(c_j) >= j (p-1) / p^2.
    """
    p = ctx.p
    out = []
    for j in range(J + 1):
        r = dwork_exp_coeff_rational(j, p)
        c = PiElement(j, embed(r, ctx))
        if r != 0:
            v = rational_valuation(r, p) + Fraction(j, p - 1)
            if v < Fraction(j * (p - 1), p * p):
                raise ArithmeticError(f"c_{j} violates the valuation bound")
        out.append(c)
    return out


def series_check_digits(p: int, mu: int, terms: int) -> int:
    """Digits of Gamma_p(a) certified by truncating the series after ``terms`` terms."""
    i = terms
    bound = Fraction((p * i + mu) * (p - 1), p * p) - Fraction(i, p - 1) - Fraction(mu, p - 1)
    return math.ceil(bound)


def dwork_gamma_series_check(a, b, ctx: PadicContext, terms: int) -> tuple[PiElement, int]:
    """Partial sum of gamma_p(a,b) = sum_i c_(p i + mu) (b)_i / (-pi)^i.

    Returns the partial sum and the number of p-adic digits (of the
    coefficient of pi^mu) that the truncation certifies.
    """
    a, b = Fraction(a), Fraction(b)
    p = ctx.p
    mu = p * b - a
    if mu.denominator != 1 or not 0 <= mu < p:
        raise ValueError("series check needs p*b - a in {0, ..., p-1}")
    mu = int(mu)
    digits = series_check_digits(p, mu, terms)
    if digits < 1:
        raise PrecisionError(f"{terms} terms certify no digits")
    # the partial sum is an exact rational times pi^mu; evaluate it with
    # enough room for the factorial denominators
    work = PadicContext(p, max(ctx.prec, digits) + 2 * terms + 8, ctx.guard)
    neg_pi_inv = PiElement(-1, embed(-1, work))
    acc = PiElement(mu, PadicNumber.zero(work, 10**9))
    for i in range(terms):
        c = PiElement(p * i + mu, embed(dwork_exp_coeff_rational(p * i + mu, p), work))
        acc = acc + c * embed(pochhammer_rational(b, i), work) * neg_pi_inv**i
    keep = min(digits, ctx.prec)
    coeff = acc.coeff
    if coeff.is_zero:
        out = PadicNumber.zero(ctx, keep)
    else:
        out = PadicNumber(ctx, coeff.val, coeff.unit, min(coeff.prec, keep - coeff.val))
    return PiElement(acc.k, out), digits
