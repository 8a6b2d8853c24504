"""Hypergeometric parameter data and its combinatorial invariants.

Parameters stay exact rationals here; nothing is embedded p-adically until
the series layer.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd
from typing import Iterable, Sequence

from .padic import is_prime


class DataError(ValueError):
    """Invalid hypergeometric parameter data."""


def _frac_part(x: Fraction) -> Fraction:
    return x - floor(x)


def parse_params(text: str) -> list[Fraction]:
    """Parse the comma-separated grammar used on the command line, e.g. ``1/3,2/3``."""
    text = text.strip()
    if not text:
        return []
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            raise DataError(f"empty entry in parameter list {text!r}")
        try:
            out.append(Fraction(tok))
        except (ValueError, ZeroDivisionError) as exc:
            raise DataError(f"bad parameter {tok!r}: {exc}") from None
    return out


def format_params(xs: Iterable[Fraction]) -> str:
    return ",".join(str(x) for x in xs)


@dataclass(frozen=True)
class HGData:
    """A validated pair of parameter multisets, reduced into [0, 1) and sorted."""

    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]

    @property
    def m(self) -> int:
        return len(self.alpha)

    @property
    def n(self) -> int:
        return len(self.beta)

    def __str__(self):
        return f"alpha=({format_params(self.alpha)}) beta=({format_params(self.beta)})"

    def denominators(self) -> set[int]:
        return {x.denominator for x in self.alpha + self.beta}

    def distinct_beta(self) -> bool:
        return len(set(self.beta)) == len(self.beta)

    def distinct_alpha(self) -> bool:
        return len(set(self.alpha)) == len(self.alpha)


def build(alpha_raw: Sequence, beta_raw: Sequence) -> HGData:
    """Reduce the parameters mod Z, sort them and check disjointness."""
    if not beta_raw:
        raise DataError("beta must be nonempty")
    alpha = tuple(sorted(_frac_part(Fraction(a)) for a in alpha_raw))
    beta = tuple(sorted(_frac_part(Fraction(b)) for b in beta_raw))
    if len(alpha) > len(beta):
        raise DataError(f"need m <= n, got m={len(alpha)}, n={len(beta)}")
    for a in alpha:
        for b in beta:
            if a == b:
                raise DataError(f"alpha and beta share the class {a} mod Z")
    return HGData(alpha, beta)


# ----------------------------------------------------------------------
# zigzag


def zigzag(d: HGData, x) -> int:
    """Z(x) = #{alpha_i < x} - #{beta_j < x} (strict inequalities)."""
    x = Fraction(x)
    return sum(1 for a in d.alpha if a < x) - sum(1 for b in d.beta if b < x)


@dataclass(frozen=True)
class ZigzagProfile:
    """Z as a step function.

    ``values[0]`` is Z on (-inf, breaks[0]] and ``values[k]`` is Z on
    (breaks[k-1], breaks[k]]; the last value holds past the last break.
    """

    breaks: tuple[Fraction, ...]
    values: tuple[int, ...]

    @property
    def max(self) -> int:
        return max(self.values)

    @property
    def min(self) -> int:
        return min(self.values)

    @property
    def weight(self) -> int:
        return self.max - self.min - 1


def zigzag_profile(d: HGData) -> ZigzagProfile:
    breaks = tuple(sorted(set(d.alpha) | set(d.beta)))
    values = [zigzag(d, breaks[0]) if breaks else 0]
    for k, b in enumerate(breaks):
        nxt = breaks[k + 1] if k + 1 < len(breaks) else b + 1
        values.append(zigzag(d, nxt))
    return ZigzagProfile(breaks, tuple(values))


def weight(d: HGData) -> int:
    return zigzag_profile(d).weight


def min_zigzag_on_beta(d: HGData) -> int:
    return min(zigzag(d, b) for b in d.beta)


# ----------------------------------------------------------------------
# arithmetic conditions


def _orbit_stable(xs: Sequence[Fraction]) -> bool:
    count = Counter(xs)
    for x in count:
        q = x.denominator
        for r in range(q):
            if gcd(r, q) == 1 and count[Fraction(r, q)] != count[x]:
                return False
    return True


def is_galois_stable(d: HGData) -> bool:
    """Fractions of equal denominator occur with equal multiplicity in alpha and in beta."""
    return _orbit_stable(d.alpha) and _orbit_stable(d.beta)


def is_tame(d: HGData, p: int) -> bool:
    return all(q % p for q in d.denominators())


def wild_primes(d: HGData) -> list[int]:
    out = set()
    for q in d.denominators():
        f = 2
        while f * f <= q:
            while q % f == 0:
                out.add(f)
                q //= f
            f += 1
        if q > 1:
            out.add(q)
    return sorted(out)


def is_good(d: HGData, p: int, t) -> bool:
    """Tame, odd, and t, 1/t, t-1 all p-adic units."""
    if p == 2 or not is_prime(p) or not is_tame(d, p):
        return False
    t = Fraction(t)
    if t.numerator % p == 0 or t.denominator % p == 0:
        return False
    return (t.numerator - t.denominator) % p != 0


def good_primes(d: HGData, t, bound: int) -> list[int]:
    return [p for p in range(3, bound + 1) if is_prime(p) and is_good(d, p, t)]


def swap(d: HGData) -> HGData:
    """Exchange alpha and beta; the companion parameter t must be inverted."""
    if d.m != d.n:
        raise DataError("swap needs m = n")
    return HGData(d.beta, d.alpha)


def _match(src: Sequence[Fraction], dst: Sequence[Fraction]) -> tuple[int, ...] | None:
    """Indices ``perm`` with ``src[k] == dst[perm[k]]``, using each target once."""
    used = [False] * len(dst)
    perm = []
    for x in src:
        for j, y in enumerate(dst):
            if not used[j] and y == x:
                used[j] = True
                perm.append(j)
                break
        else:
            return None
    return tuple(perm)


@dataclass(frozen=True)
class PrimeShift:
    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]
    alpha_perm: tuple[int, ...] | None
    beta_perm: tuple[int, ...] | None


def prime_shift(d: HGData, p: int) -> PrimeShift:
    """alpha'_i = {p alpha_i}, beta'_j = {p beta_j}, index by index.

    When the shifted multisets equal the originals, ``beta_perm[j]`` is the
    index k with ``beta'_j == beta_k`` (likewise for alpha).
    """
    if not is_tame(d, p):
        raise DataError(f"p={p} divides a parameter denominator")
    a1 = tuple(_frac_part(p * a) for a in d.alpha)
    b1 = tuple(_frac_part(p * b) for b in d.beta)
    return PrimeShift(a1, b1, _match(a1, d.alpha), _match(b1, d.beta))


@dataclass(frozen=True)
class LocalExponents:
    zero: tuple[Fraction, ...]
    one: tuple[Fraction, ...]
    infinity: tuple[Fraction, ...]


def local_exponents(d: HGData) -> LocalExponents:
    if d.m != d.n:
        raise DataError("local exponents need m = n")
    gamma = sum(d.beta, Fraction(0)) - sum(d.alpha, Fraction(0))
    one = tuple(Fraction(k) for k in range(d.n - 1)) + (gamma,)
    return LocalExponents(tuple(1 - b for b in d.beta), one, d.alpha)
