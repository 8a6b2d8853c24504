from fractions import Fraction as F
from math import factorial

import pytest
from hypothesis import given, strategies as st

from hgfrob.gamma import (PiElement, dwork_exp_coeff_rational, dwork_exp_coeffs, dwork_gamma,
                          dwork_gamma_series_check, morita_gamma, morita_gamma_naive, pochhammer_rational,
                          series_check_digits)
from hgfrob.padic import PadicContext, PrecisionError, embed

PRIMES = [3, 5, 7, 13]


def _residue_class(x: F, p: int) -> int:
    """y in {1, ..., p} with y = x mod p."""
    return (x.numerator * pow(x.denominator, -1, p)) % p or p


@pytest.mark.parametrize("p", PRIMES)
def test_base_values(p):
    ctx = PadicContext(p, 20)
    assert morita_gamma(0, ctx).residue() == 1
    assert morita_gamma(1, ctx).lift_symmetric() == -1
    assert morita_gamma(2, ctx).lift_symmetric() == 1


@pytest.mark.parametrize("p", [3, 5, 7])
def test_small_integers_match_definition(p):
    ctx = PadicContext(p, 6)
    for n in range(1, 40):
        prod = 1
        for j in range(1, n):
            if j % p:
                prod *= j
        assert (morita_gamma(n, ctx) - (-1) ** n * prod).is_zero


@pytest.mark.parametrize("p", [3, 5, 7])
def test_fast_matches_naive_product(p):
    ctx = PadicContext(p, 3)
    for x in [F(1, 2), F(1, 4), F(-5, 8), F(7, 11), 17, -3]:
        assert (morita_gamma(x, ctx) - morita_gamma_naive(x, ctx)).is_zero


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_gamma_half_squared(p):
    # reflection at x = 1/2 pins the value (-1)^((p+1)/2)
    ctx = PadicContext(p, 20)
    g = morita_gamma(F(1, 2), ctx)
    assert (g * g).lift_symmetric() == (-1) ** ((p + 1) // 2)


def test_rejects_non_integral_argument():
    with pytest.raises(ValueError):
        morita_gamma(F(1, 7), PadicContext(7, 5))
    with pytest.raises(TypeError):
        morita_gamma(embed(1, PadicContext(7, 5)), PadicContext(7, 5))


xs = st.builds(F, st.integers(-10**9, 10**9), st.sampled_from([1, 2, 4, 8, 11, 17]))


@given(st.sampled_from(PRIMES), xs)
def test_functional_equation(p, x):
    ctx = PadicContext(p, 20)
    g, g1 = morita_gamma(x, ctx), morita_gamma(x + 1, ctx)
    xp = embed(x, ctx)
    ratio = -1 if (xp.is_zero or xp.val > 0) else -xp
    assert (g1 - ratio * g).is_zero


@given(st.sampled_from(PRIMES), xs)
def test_reflection(p, x):
    ctx = PadicContext(p, 20)
    prod = morita_gamma(x, ctx) * morita_gamma(1 - x, ctx)
    assert prod.lift_symmetric() == (-1) ** _residue_class(x, p)


@given(st.sampled_from(PRIMES), xs, st.integers(1, 5))
def test_continuity(p, x, k):
    # |x - y| <= p^-k implies |Gamma(x) - Gamma(y)| <= p^-k
    ctx = PadicContext(p, 20)
    d = morita_gamma(x, ctx) - morita_gamma(x + p**k * 3, ctx)
    assert d.is_zero or d.val >= k


def test_pi_element_normalization():
    ctx = PadicContext(5, 10)
    x = PiElement(6, embed(1, ctx))  # pi^6 = pi^2 * (-5)
    assert x.k == 2 and x.coeff.lift_symmetric() == -5
    assert PiElement.pi_power(3, ctx) * PiElement.pi_power(1, ctx) == PiElement(0, embed(-5, ctx))
    assert (PiElement(3, embed(2, ctx)).inverse() * PiElement(3, embed(2, ctx))) == PiElement(0, embed(1, ctx))


def test_pochhammer():
    assert pochhammer_rational(F(1, 2), 3) == F(1, 2) * F(3, 2) * F(5, 2)
    assert pochhammer_rational(3, 0) == 1
    assert pochhammer_rational(F(1, 2), -1) == 1 / F(-1, 2)
    with pytest.raises(ZeroDivisionError):
        pochhammer_rational(1, -1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_dwork_exponential_coefficients(p):
    # exp(pi t) exp(-pi t^p): the first p coefficients are 1/j!
    for j in range(p):
        assert dwork_exp_coeff_rational(j, p) == F(1, factorial(j))
    assert len(dwork_exp_coeffs(PadicContext(p, 10), 3 * p)) == 3 * p + 1


def test_dwork_gamma_reduces_to_morita():
    ctx = PadicContext(7, 12)
    a, b = F(1, 3), F(1, 3)
    # p b - a = 2 lies in {0, ..., p-1}
    g = dwork_gamma(a, b, ctx)
    assert g.k == 2
    assert (g.coeff - morita_gamma(a, ctx)).is_zero


@pytest.mark.parametrize("p", [3, 5, 7])
def test_dwork_gamma_matches_series(p):
    ctx = PadicContext(p, 8)
    for mu in range(p):
        b = F(3, 4)
        a = p * b - mu
        ref, digits = dwork_gamma_series_check(a, b, ctx, 40)
        assert digits >= 3
        got = dwork_gamma(a, b, ctx)
        assert got.k == ref.k
        d = got.coeff - ref.coeff
        assert d.is_zero or d.val >= min(digits, ctx.prec)


def test_dwork_gamma_shift_relation():
    # gamma(a + 1, b) = gamma(a, b) * a / (-pi)
    ctx = PadicContext(5, 10)
    a, b = F(1, 2) * 5 - 7, F(1, 2)
    lhs = dwork_gamma(a + 1, b, ctx)
    rhs = dwork_gamma(a, b, ctx) * embed(a, ctx) * PiElement(-1, embed(-1, ctx))
    assert lhs == rhs


def test_series_check_validation():
    ctx = PadicContext(5, 8)
    with pytest.raises(ValueError):
        dwork_gamma_series_check(F(1, 3), F(1, 2), ctx, 10)  # p b - a not an integer
    with pytest.raises(ValueError):
        dwork_gamma_series_check(F(5, 2) - 7, F(1, 2), ctx, 10)  # p b - a = 7 out of range
    with pytest.raises(PrecisionError):
        dwork_gamma_series_check(F(5, 2), F(1, 2), ctx, 0)
    assert series_check_digits(3, 0, 40) >= 3
