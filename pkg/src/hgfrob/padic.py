"""Truncated p-adic arithmetic: scalars, Laurent series and series matrices.

Scalars (:class:`PadicNumber`) carry a valuation, a unit and a relative
precision.  Series (:class:`PadicSeries`) use a fixed absolute precision with
a common power-of-p shift, so that their coefficient vectors are plain
integers and products can be done by Kronecker substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]


class PrecisionError(ArithmeticError):
    """Raised when a result would carry no significant digits."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def rational_valuation(r: Rational, p: int) -> int:
    r = Fraction(r)
    return valuation(r.numerator, p) - valuation(r.denominator, p)


@dataclass(frozen=True)
class PadicContext:
    """A prime ``p`` and a working precision ``prec`` (significant digits).

    ``guard`` extra digits are added by pipelines that expect division
    losses; see :meth:`working`.
    """

    p: int
    prec: int
    guard: int = 4

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p == 2:
            raise ValueError("p = 2 is not supported")
        if self.prec < 1:
            raise ValueError("precision must be positive")
        if self.guard < 0:
            raise ValueError("guard must be nonnegative")

    @property
    def modulus(self) -> int:
        return self.p**self.prec

    def working(self, extra: int | None = None) -> "PadicContext":
        """Context with ``prec + guard`` (or ``prec + extra``) digits."""
        g = self.guard if extra is None else extra
        return PadicContext(self.p, self.prec + g, self.guard)

    def __call__(self, x) -> "PadicNumber":
        return embed(x, self)


class PadicNumber:
    """An element of Q_p known to ``prec`` significant digits.

    A nonzero value is ``p**val * unit`` with ``unit`` a p-adic unit known mod
    ``p**prec``.  A value indistinguishable from zero has ``unit == 0`` and
    means ``O(p**val)``.
    """

    __slots__ = ("ctx", "val", "unit", "prec")

    def __init__(self, ctx: PadicContext, val: int, unit: int, prec: int):
        self.ctx = ctx
        self.val = val
        self.prec = prec
        self.unit = unit % ctx.p**prec if unit and prec > 0 else 0
        if self.unit == 0:
            self.prec = 0

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, ctx: PadicContext, absprec: int | None = None) -> "PadicNumber":
        return cls(ctx, ctx.prec if absprec is None else absprec, 0, 0)

    @classmethod
    def from_int_mod(cls, ctx: PadicContext, n: int, absprec: int, shift: int = 0):
        """The value ``p**shift * n`` known modulo ``p**absprec``."""
        digits = absprec - shift
        if digits <= 0:
            return cls.zero(ctx, absprec)
        n %= ctx.p**digits
        if n == 0:
            return cls.zero(ctx, absprec)
        v = valuation(n, ctx.p)
        return cls(ctx, shift + v, n // ctx.p**v, digits - v)

    # inspection -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def absprec(self) -> int:
        return self.val + self.prec

    def valuation(self) -> float:
        return float("inf") if self.is_zero else self.val

    def residue(self, k: int | None = None) -> int:
        """Integer representative of an integral value modulo ``p**k``."""
        k = self.absprec if k is None else k
        if k > self.absprec:
            raise PrecisionError(f"only {self.absprec} digits known, asked for {k}")
        if self.is_zero or k <= 0:
            return 0
        if self.val < 0:
            raise ValueError("value is not integral")
        return (self.unit * self.ctx.p**self.val) % self.ctx.p**k

    def to_int_mod(self, absprec: int, shift: int) -> int:
        """Integer ``c`` with ``self == p**shift * c`` mod ``p**absprec``."""
        if self.is_zero:
            return 0
        if self.val < shift:
            raise ValueError("value has lower valuation than the requested shift")
        digits = absprec - shift
        if digits <= 0:
            return 0
        return (self.unit * self.ctx.p ** (self.val - shift)) % self.ctx.p**digits

    def lift_symmetric(self) -> int:
        """The integer in ``(-p**A/2, p**A/2]`` congruent to this value."""
        m = self.ctx.p**self.absprec
        r = self.residue()
        return r - m if r > m // 2 else r

    def __repr__(self):
        if self.is_zero:
            return f"O({self.ctx.p}^{self.val})"
        return f"{self.unit}*{self.ctx.p}^{self.val} + O({self.ctx.p}^{self.absprec})"

    # arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.ctx.p != self.ctx.p:
                raise ValueError("mixing different primes")
            return other
        return embed(other, self.ctx)

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ctx.p
        A = min(self.absprec, other.absprec)
        if self.is_zero and other.is_zero:
            return PadicNumber.zero(self.ctx, A)
        v = min(x.val for x in (self, other) if not x.is_zero)
        if A <= v:
            return PadicNumber.zero(self.ctx, A)
        s = 0
        for x in (self, other):
            if not x.is_zero:
                s += x.unit * p ** (x.val - v)
        return PadicNumber.from_int_mod(self.ctx, s, A, v)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero:
            return self
        return PadicNumber(self.ctx, self.val, -self.unit, self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            # O(p^a) * p^v u = O(p^(a+v)); valuations of zeros are their absprec
            return PadicNumber.zero(self.ctx, self.val + other.val)
        prec = min(self.prec, other.prec)
        return PadicNumber(self.ctx, self.val + other.val, self.unit * other.unit, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.is_zero:
            raise PrecisionError("inverse of a value indistinguishable from zero")
        m = self.ctx.p**self.prec
        return PadicNumber(self.ctx, -self.val, pow(self.unit, -1, m), self.prec)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if self.is_zero:
            return PadicNumber.zero(self.ctx, self.val * k) if k else embed(1, self.ctx)
        m = self.ctx.p**self.prec
        return PadicNumber(self.ctx, self.val * k, pow(self.unit, k, m), self.prec)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self - other).is_zero

    def __hash__(self):
        raise TypeError("PadicNumber is not hashable")


def embed(r, ctx: PadicContext, prec: int | None = None) -> PadicNumber:
    """Embed an exact rational into Q_p with ``prec`` significant digits."""
    if isinstance(r, PadicNumber):
        return r
    prec = ctx.prec if prec is None else prec
    r = Fraction(r)
    if r == 0:
        return PadicNumber.zero(ctx, prec)
    p = ctx.p
    num, den = r.numerator, r.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    m = p**prec
    return PadicNumber(ctx, v, num * pow(den, -1, m), prec)


embed_rational = embed


def teichmuller(a: int, ctx: PadicContext) -> PadicNumber:
    """The (p-1)-st root of unity congruent to ``a`` mod p."""
    p = ctx.p
    if a % p == 0:
        raise ValueError("Teichmuller lift of a multiple of p")
    m = ctx.modulus
    x = a % m
    while True:
        y = pow(x, p, m)
        if y == x:
            return PadicNumber(ctx, 0, x, ctx.prec)
        x = y


# ----------------------------------------------------------------------
# series


def _kron_mul(a: Sequence[int], b: Sequence[int], mod: int, n_out: int) -> list[int]:
    """First ``n_out`` coefficients of the product of two integer vectors mod ``mod``."""
    a = [x % mod for x in a[:n_out]]
    b = [x % mod for x in b[:n_out]]
    if not a or not b:
        return [0] * n_out
    if len(a) < 8 or len(b) < 8:
        out = [0] * n_out
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b[: n_out - i]):
                    out[i + j] += x * y
        return [c % mod for c in out]
    bits = 2 * (mod - 1).bit_length() + min(len(a), len(b)).bit_length() + 1
    nb = (bits + 7) // 8
    A = int.from_bytes(b"".join(x.to_bytes(nb, "little") for x in a), "little")
    B = int.from_bytes(b"".join(x.to_bytes(nb, "little") for x in b), "little")
    n_full = len(a) + len(b) - 1
    raw = (A * B).to_bytes(nb * (n_full + 1), "little")
    out = []
    for k in range(min(n_out, n_full)):
        out.append(int.from_bytes(raw[k * nb:(k + 1) * nb], "little") % mod)
    out.extend([0] * (n_out - len(out)))
    return out


class PadicSeries:
    """Truncated Laurent series ``sum p**shift * c_k * var**(lowest + k)``.

    Each ``c_k`` is an integer known modulo ``p**(absprec - shift)``; the
    series is known modulo ``var**(lowest + order)`` and ``p**absprec``.
    Instances are immutable.
    """

    __slots__ = ("ctx", "coeffs", "shift", "absprec", "lowest", "var")

    def __init__(self, ctx: PadicContext, coeffs: Iterable[int], shift: int, absprec: int,
                 lowest: int = 0, var: str = "t"):
        if absprec <= shift:
            raise PrecisionError(f"series with no significant digits (shift {shift}, absprec {absprec})")
        m = ctx.p ** (absprec - shift)
        self.ctx = ctx
        self.coeffs = tuple(c % m for c in coeffs)
        self.shift = shift
        self.absprec = absprec
        self.lowest = lowest
        self.var = var

    # construction -----------------------------------------------------

    @classmethod
    def from_padics(cls, values: Sequence, ctx: PadicContext, lowest: int = 0,
                    var: str = "t", absprec: int | None = None) -> "PadicSeries":
        """Pack a list of scalars (PadicNumber or rationals) into a series."""
        vals = [embed(v, ctx) for v in values]
        nz = [v for v in vals if not v.is_zero]
        A = min(v.absprec for v in vals) if vals else ctx.prec
        if absprec is not None:
            A = min(A, absprec)
        shift = min((v.val for v in nz), default=A - 1)
        shift = min(shift, A - 1)
        return cls(ctx, [v.to_int_mod(A, shift) for v in vals], shift, A, lowest, var)

    @classmethod
    def monomial(cls, ctx: PadicContext, exponent: int, order: int, var: str = "t",
                 coeff=1) -> "PadicSeries":
        c = embed(coeff, ctx)
        vals = [c] + [0] * (order - 1)
        return cls.from_padics(vals, ctx, exponent, var)

    @classmethod
    def one(cls, ctx: PadicContext, order: int, var: str = "t") -> "PadicSeries":
        return cls.monomial(ctx, 0, order, var)

    @classmethod
    def zero(cls, ctx: PadicContext, order: int, var: str = "t", lowest: int = 0,
             absprec: int | None = None) -> "PadicSeries":
        A = ctx.prec if absprec is None else absprec
        return cls(ctx, [0] * order, A - 1, A, lowest, var)

    # inspection -------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def top(self) -> int:
        """Exponent of the first unknown term."""
        return self.lowest + len(self.coeffs)

    @property
    def digits(self) -> int:
        return self.absprec - self.shift

    def coefficient(self, k: int) -> PadicNumber:
        """Coefficient of ``var**k``."""
        if k >= self.top:
            raise IndexError(f"coefficient {k} beyond truncation {self.top}")
        if k < self.lowest:
            return PadicNumber.zero(self.ctx, self.absprec)
        return PadicNumber.from_int_mod(self.ctx, self.coeffs[k - self.lowest], self.absprec, self.shift)

    @property
    def padic_coeffs(self) -> list[PadicNumber]:
        return [self.coefficient(self.lowest + i) for i in range(self.order)]

    def min_valuation(self) -> float:
        """Smallest valuation among known-nonzero coefficients (inf if none)."""
        best = float("inf")
        p = self.ctx.p
        for c in self.coeffs:
            if c:
                best = min(best, self.shift + valuation(c, p))
        return best

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs[:6]):
            if c:
                terms.append(f"{c}*p^{self.shift}*{self.var}^{self.lowest + i}")
        return " + ".join(terms or ["0"]) + f" + O({self.var}^{self.top}, p^{self.absprec})"

    # helpers ----------------------------------------------------------

    def _with(self, coeffs, shift=None, absprec=None, lowest=None) -> "PadicSeries":
        return PadicSeries(self.ctx, coeffs, self.shift if shift is None else shift,
                           self.absprec if absprec is None else absprec,
                           self.lowest if lowest is None else lowest, self.var)

    def rescaled(self, shift: int) -> list[int]:
        """Coefficients re-expressed against a lower shift."""
        if shift > self.shift:
            raise ValueError("can only lower the shift")
        f = self.ctx.p ** (self.shift - shift)
        return [c * f for c in self.coeffs]

    def normalized(self) -> "PadicSeries":
        """Raise the shift to the actual minimal valuation."""
        v = self.min_valuation()
        if v == float("inf"):
            return self._with(self.coeffs, shift=self.absprec - 1)
        v = int(v)
        if v == self.shift:
            return self
        d = self.ctx.p ** (v - self.shift)
        return self._with([c // d for c in self.coeffs], shift=v)

    def truncate(self, top: int) -> "PadicSeries":
        """Drop terms of exponent ``>= top``."""
        n = top - self.lowest
        if n > self.order:
            raise ValueError("cannot extend a truncated series")
        return self._with(self.coeffs[:max(n, 0)])

    def with_lowest(self, lowest: int) -> "PadicSeries":
        """Re-express with a smaller lowest exponent (pads with zeros)."""
        if lowest > self.lowest:
            lead = self.coeffs[:lowest - self.lowest]
            if any(lead):
                raise ValueError("nonzero terms below the requested lowest exponent")
            return self._with(self.coeffs[lowest - self.lowest:], lowest=lowest)
        return self._with((0,) * (self.lowest - lowest) + self.coeffs, lowest=lowest)

    def reduce_precision(self, absprec: int) -> "PadicSeries":
        if absprec >= self.absprec:
            return self
        return self._with(self.coeffs, absprec=absprec)

    # arithmetic -------------------------------------------------------

    def __add__(self, other: "PadicSeries") -> "PadicSeries":
        if not isinstance(other, PadicSeries):
            return NotImplemented
        lo = min(self.lowest, other.lowest)
        top = min(self.top, other.top)
        S = min(self.shift, other.shift)
        A = min(self.absprec, other.absprec)
        if A <= S:
            raise PrecisionError("sum has no significant digits")
        a = self.rescaled(S)
        b = other.rescaled(S)
        out = [0] * (top - lo)
        for i, c in enumerate(a):
            e = self.lowest + i
            if e < top:
                out[e - lo] += c
        for i, c in enumerate(b):
            e = other.lowest + i
            if e < top:
                out[e - lo] += c
        return PadicSeries(self.ctx, out, S, A, lo, self.var)

    def __neg__(self):
        return self._with([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PadicSeries):
            return series_mul(self, other)
        return series_scale(self, other)

    __rmul__ = __mul__


def series_mul(f: PadicSeries, g: PadicSeries) -> PadicSeries:
    n = min(f.order, g.order)
    S = f.shift + g.shift
    A = min(f.absprec + g.shift, g.absprec + f.shift)
    mod = f.ctx.p ** (A - S)
    coeffs = _kron_mul(list(f.coeffs), list(g.coeffs), mod, n)
    return PadicSeries(f.ctx, coeffs, S, A, f.lowest + g.lowest, f.var)


def series_mul_poly(f: PadicSeries, poly: Sequence[int], offset: int = 0) -> PadicSeries:
    """Multiply by an exact integer polynomial ``sum poly[i] var**(offset+i)``.

    The truncation order of ``f`` is preserved (relative to its lowest term).
    """
    mod = f.ctx.p ** f.digits
    coeffs = _kron_mul(list(f.coeffs), [c % mod for c in poly], mod, f.order)
    return f._with(coeffs, lowest=f.lowest + offset)


def series_scale(f: PadicSeries, x) -> PadicSeries:
    x = embed(x, f.ctx)
    if x.is_zero:
        return PadicSeries.zero(f.ctx, f.order, f.var, f.lowest, f.absprec + x.val)
    S = f.shift + x.val
    A = min(f.absprec + x.val, S + x.prec)
    return PadicSeries(f.ctx, [c * x.unit for c in f.coeffs], S, A, f.lowest, f.var)


def series_inv(f: PadicSeries) -> PadicSeries:
    """Inverse of a series whose lowest stored coefficient is nonzero.

    When the lowest coefficient is not of minimal valuation the inverse is
    computed after the substitution ``var -> p**w var`` and loses ``w`` digits
    per degree.
    """
    f = f.normalized()
    p = f.ctx.p
    if not f.coeffs or f.coeffs[0] == 0:
        raise PrecisionError("series inverse: leading coefficient indistinguishable from zero")
    M = f.order
    w = valuation(f.coeffs[0], p)
    digits = f.digits
    if w == 0:
        mod = p**digits
        g = _newton_inverse(list(f.coeffs), mod, M)
        return PadicSeries(f.ctx, g, -f.shift, -f.shift + digits, -f.lowest, f.var)
    # substitute var -> p**w var and divide by p**w to get a unit constant term
    d2 = digits - w
    if d2 <= 0:
        raise PrecisionError("series inverse: not enough digits")
    mod = p**d2
    scaled = [f.coeffs[0] // p**w] + [c * p ** (w * (k - 1)) for k, c in enumerate(f.coeffs) if k]
    g = _newton_inverse(scaled, mod, M)
    # coefficient k of the inverse is g_k * p**(-shift - w - w*k)
    S = -f.shift - w * M
    out = [gk * p ** (w * (M - 1 - k)) for k, gk in enumerate(g)]
    return PadicSeries(f.ctx, out, S, S + d2, -f.lowest, f.var)


def _newton_inverse(c: list[int], mod: int, M: int) -> list[int]:
    g = [pow(c[0], -1, mod)]
    k = 1
    while k < M:
        k = min(2 * k, M)
        fg = _kron_mul(c[:k], g, mod, k)
        corr = [(-x) % mod for x in fg]
        corr[0] = (corr[0] + 2) % mod
        g = _kron_mul(g, corr, mod, k)
    return g[:M]


def series_derivation_D(f: PadicSeries) -> PadicSeries:
    """Apply ``D = var * d/dvar``."""
    return f._with([(f.lowest + k) * c for k, c in enumerate(f.coeffs)])


def series_substitute_frobenius(f: PadicSeries, order: int | None = None) -> PadicSeries:
    """Substitute ``var -> var**p``; ``order`` caps the number of stored terms."""
    p = f.ctx.p
    n = p * f.order if order is None else min(p * f.order, order)
    out = [0] * n
    for k, c in enumerate(f.coeffs[:(n + p - 1) // p]):
        out[p * k] = c
    return f._with(out, lowest=p * f.lowest)


@lru_cache(maxsize=256)
def _t_minus_one_power(e: int) -> tuple[int, ...]:
    return tuple(comb(e, i) * (-1) ** (e - i) for i in range(e + 1))


def series_mul_by_power(f: PadicSeries, e: int, kind: str = "t-1") -> PadicSeries:
    """Multiply by ``(var - 1)**e`` (``kind="t-1"``) or ``var**e`` (``kind="t"``)."""
    if kind == "t":
        return f._with(f.coeffs, lowest=f.lowest + e)
    if kind != "t-1":
        raise ValueError(f"unknown power kind {kind!r}")
    if e < 0:
        raise ValueError("negative powers of (t-1) are not series at 0")
    return series_mul_poly(f, _t_minus_one_power(e))


def series_evaluate(f: PadicSeries, x) -> PadicNumber:
    """Evaluate the stored (truncated) Laurent polynomial at ``x``.

    The caller is responsible for the tail being negligible at ``x``.
    """
    x = embed(x, f.ctx)
    p = f.ctx.p
    if f.lowest < 0 and (x.is_zero or x.val != 0):
        raise ValueError("evaluating negative powers requires a unit point")
    if x.is_zero:
        return f.coefficient(0) if f.lowest <= 0 else PadicNumber.zero(f.ctx, f.absprec)
    if x.val < 0:
        raise ValueError("evaluation point must be integral")
    digits = f.digits
    mod = p**digits
    xi = x.to_int_mod(x.absprec, 0)
    acc = 0
    for c in reversed(f.coeffs):
        acc = (acc * xi + c) % mod
    res = PadicNumber.from_int_mod(f.ctx, acc, f.absprec, f.shift)
    if f.lowest:
        res = res * x**f.lowest
    # evaluation point precision limits the result as well
    A = min(res.absprec, f.shift + x.absprec)
    if res.is_zero:
        return PadicNumber.zero(f.ctx, A)
    return PadicNumber.from_int_mod(f.ctx, res.to_int_mod(res.absprec, res.val), A, res.val)


# ----------------------------------------------------------------------
# matrices


class SeriesMatrix:
    """Square matrix of :class:`PadicSeries` sharing a context and variable."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence[PadicSeries]]):
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.rows = rows

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def ctx(self) -> PadicContext:
        return self.rows[0][0].ctx

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @classmethod
    def identity(cls, ctx: PadicContext, n: int, order: int, var: str = "t") -> "SeriesMatrix":
        return cls([[PadicSeries.one(ctx, order, var) if i == j else PadicSeries.zero(ctx, order, var)
                     for j in range(n)] for i in range(n)])

    def map(self, fn) -> "SeriesMatrix":
        return SeriesMatrix([[fn(x) for x in row] for row in self.rows])

    def __add__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        return SeriesMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        return SeriesMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __matmul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        return mat_mul(self, other)

    def constant_matrix(self) -> list[list[PadicNumber]]:
        return [[x.coefficient(0) for x in row] for row in self.rows]

    @property
    def absprec(self) -> int:
        return min(x.absprec for row in self.rows for x in row)

    @property
    def top(self) -> int:
        return min(x.top for row in self.rows for x in row)


def _sum(terms: list[PadicSeries]) -> PadicSeries:
    acc = terms[0]
    for t in terms[1:]:
        acc = acc + t
    return acc


def mat_mul(a: SeriesMatrix, b: SeriesMatrix) -> SeriesMatrix:
    n = a.n
    return SeriesMatrix([[_sum([series_mul(a.rows[i][k], b.rows[k][j]) for k in range(n)])
                          for j in range(n)] for i in range(n)])


def _det_and_minors(m: list[list[PadicSeries]]):
    """Determinant and adjugate by Laplace expansion with memoized minors."""
    n = len(m)
    memo: dict = {}

    def minor(rows: tuple, cols: tuple) -> PadicSeries:
        key = (rows, cols)
        if key in memo:
            return memo[key]
        if len(rows) == 1:
            val = m[rows[0]][cols[0]]
        else:
            r0 = rows[0]
            rest = rows[1:]
            terms = []
            for k, c in enumerate(cols):
                sub = minor(rest, cols[:k] + cols[k + 1:])
                term = series_mul(m[r0][c], sub)
                terms.append(-term if k % 2 else term)
            val = _sum(terms)
        memo[key] = val
        return val

    allr = tuple(range(n))
    det = minor(allr, allr)
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if n == 1:
                adj[j][i] = PadicSeries.one(m[0][0].ctx, m[0][0].order, m[0][0].var)
                continue
            sub = minor(allr[:i] + allr[i + 1:], allr[:j] + allr[j + 1:])
            adj[j][i] = -sub if (i + j) % 2 else sub
    return det, adj


def mat_det(a: SeriesMatrix) -> PadicSeries:
    return _det_and_minors(a.rows)[0]


def mat_inv(a: SeriesMatrix) -> SeriesMatrix:
    """Inverse over power series, as adjugate times the inverse determinant."""
    if any(x.lowest < 0 for row in a.rows for x in row):
        raise ValueError("mat_inv expects power series entries")
    det, adj = _det_and_minors(a.rows)
    dinv = series_inv(det)
    return SeriesMatrix([[series_mul(x, dinv) for x in row] for row in adj])


def mat_charpoly(a: Sequence[Sequence]) -> list[PadicNumber]:
    """Coefficients ``[1, c_1, ..., c_n]`` of ``det(T*I - A)`` (highest first).

    Division-free (Berkowitz), so valid over any commutative ring.
    """
    n = len(a)
    if n == 0:
        return [1]
    ctx = next(x.ctx for row in a for x in row if isinstance(x, PadicNumber))
    A = [[embed(x, ctx) for x in row] for row in a]
    one = embed(1, ctx)
    # Berkowitz: build Toeplitz products from the bottom-right corner outwards
    vect = [one, -A[n - 1][n - 1]]
    for r in range(n - 2, -1, -1):
        size = n - r  # principal submatrix A[r:, r:]
        R = A[r][r + 1:]
        C = [A[i][r] for i in range(r + 1, n)]
        Asub = [row[r + 1:] for row in A[r + 1:]]
        # powers: R * Asub^k * C for k = 0..size-2
        q = [one, -A[r][r]]
        v = C
        for k in range(size - 1):
            q.append(-_dot(R, v))
            v = [_dot(row, v) for row in Asub]
        # Toeplitz multiply q (length size+1) by vect (length size)
        vect = [_dot([q[i - j] for j in range(len(vect)) if 0 <= i - j < len(q)],
                     [vect[j] for j in range(len(vect)) if 0 <= i - j < len(q)])
                for i in range(size + 1)]
    return vect


def _dot(u, v):
    acc = u[0] * v[0]
    for x, y in zip(u[1:], v[1:]):
        acc = acc + x * y
    return acc
