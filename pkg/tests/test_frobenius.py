import logging
from fractions import Fraction as F
from functools import lru_cache
from math import isqrt

import pytest
from hypothesis import given, strategies as st

from hgfrob.frobenius import (Certificate, TruncationError, assemble, choose_truncations, compute_frobenius,
                              euler_factor, euler_factors, f0_matrix, primed_data, specialize,
                              validate_commutation, weil_bound, weil_symmetry_check)
from hgfrob.hgdata import DataError, build, min_zigzag_on_beta, zigzag
from hgfrob.padic import PadicContext, mat_charpoly

DATUM = build([F(1, 3), F(2, 3)], [F(1, 4), F(3, 4)])


@lru_cache(maxsize=None)
def frob(p, N=20, variant="motivic", data=DATUM):
    return compute_frobenius(data, p, N, variant)


def test_f0_shape(datum):
    ctx = PadicContext(7, 20)
    f0 = f0_matrix(datum, 7, ctx)
    # 7 * 3/4 = 1/4 mod 1 and 7 * 1/4 = 3/4 mod 1
    assert [f0.column_of(i) for i in range(2)] == [1, 0]
    assert [e[2] for e in f0.entries] == [1 - 7 + 5, 1 - 7 + 1]
    assert [e[1].val for e in f0.entries] == [1, 0]
    f5 = f0_matrix(datum, 5, PadicContext(5, 20))
    assert [f5.column_of(i) for i in range(2)] == [0, 1]


def test_f0_entry_valuations_follow_zigzag(datum):
    for p in (5, 7, 11, 13):
        f0 = f0_matrix(datum, p, PadicContext(p, 20))
        zmin = min_zigzag_on_beta(datum)
        for i in range(2):
            j, c, _ = f0.entries[i]
            assert c.val == zigzag(datum, datum.beta[j]) - zmin


def test_f0_rejections(datum, quintic):
    ctx = PadicContext(7, 10)
    with pytest.raises(DataError):
        f0_matrix(quintic, 7, ctx)
    with pytest.raises(DataError):
        f0_matrix(build([F(1, 5)], [0]), 7, ctx)  # not Galois-stable
    with pytest.raises(DataError):
        f0_matrix(datum, 3, PadicContext(3, 10))
    with pytest.raises(ValueError):
        f0_matrix(datum, 7, ctx, variant="nope")
    assert f0_matrix(build([F(1, 5)], [0]), 7, ctx, variant="dwork").n == 1


def test_primed_data(datum):
    assert primed_data(datum, 7) == datum


def test_truncation_defaults_grow_with_p():
    M5, e5 = choose_truncations(DATUM, 5, 20)
    M47, e47 = choose_truncations(DATUM, 47, 20)
    assert e47 > e5 and M47 - e47 > 2 * 47


def test_certificate_passes():
    F_ = frob(7)
    c = F_.certificate
    assert c.absprec >= 20 and c.tail_ok and c.residual_valuation >= 18
    assert c.digits >= 20
    d = c.as_dict()
    assert set(d) >= {"absprec", "tail_window", "tail_valuation", "target", "residual_valuation"}


def test_certificate_digits():
    c = Certificate(25, 10, 22.0, 0.0, 20)
    assert c.tail_ok and c.digits == 22
    assert not Certificate(25, 10, 3.0, 0.0, 20).tail_ok


def test_specialize_rejects_singular_residues():
    F_ = frob(7)
    for t0 in (0, 1, 7, 8):
        with pytest.raises(DataError):
            specialize(F_, t0)


def test_commutation_modes():
    F_ = frob(7, 12)
    assert validate_commutation(F_, "global").passed
    assert validate_commutation(F_, "window").passed
    bad = assemble(DATUM, 7, 12, F_.M, F_.e, f0=F_.f0.scaled(0, 1 + 7))
    assert not validate_commutation(bad, "global").passed
    with pytest.raises(ValueError):
        validate_commutation(F_, "nope")


def test_truncation_error_carries_history():
    with pytest.raises(TruncationError) as exc:
        compute_frobenius(DATUM, 7, 20, M=40, e=5, max_escalations=0)
    assert "M=40, e=5" in str(exc.value)


def test_escalation_recovers(caplog):
    with caplog.at_level(logging.INFO, logger="hgfrob.frobenius"):
        F_ = compute_frobenius(DATUM, 7, 10, e=20, max_escalations=6)
    assert F_.certificate.tail_ok
    assert any("rejected" in r.message for r in caplog.records)


def test_weil_symmetry_examples():
    assert weil_symmetry_check([1, -3, 7], 7, 1) == 1
    assert weil_symmetry_check([1, -3, 7, -21, 49], 7, 1) == 1
    assert weil_symmetry_check([1, 1], 11, 0) == 1
    # c_1 = eps c_0 for a degree-1 weight-0 factor
    assert weil_symmetry_check([1, -1], 11, 0) == -1
    assert weil_symmetry_check([1, 0, -7], 7, 1) == -1
    assert weil_symmetry_check([1, 3, -7], 7, 1) is None
    assert weil_symmetry_check([1, 2, 5], 7, 1) is None
    assert weil_symmetry_check([1, 2], 7, 1) is None
    assert weil_bound(2, 1, 13, 1) == pytest.approx(2 * 13**0.5)


def test_euler_factor_matches_charpoly():
    F_ = frob(11)
    A = specialize(F_, 3)
    ef = euler_factor(A, DATUM, 11, 3)
    cp = mat_charpoly(A)
    assert ef.coeffs[1] == cp[1].lift_symmetric() and ef.coeffs[2] == cp[2].lift_symmetric()
    assert ef.as_dict()["coeffs"] == list(ef.coeffs) and ef.degree == 2


def test_euler_factor_precision_failure():
    F_ = frob(11)
    A = specialize(F_, 3, digits=1)
    with pytest.raises(Exception) as exc:
        euler_factor(A, DATUM, 11, 3)
    assert "Weil window" in str(exc.value)


def test_rank_one_character_law(rank_one):
    # pinned empirically: the eigenvalue is the Legendre symbol of 1 - t0
    for p in (7, 11, 13):
        efs, _ = euler_factors(rank_one, p, range(2, p), N=20)
        for ef in efs:
            legendre = 1 if pow(1 - ef.t0, (p - 1) // 2, p) == 1 else -1
            assert ef.coeffs == (1, -legendre)


def test_dwork_variant_differs_by_a_constant(rank_one):
    p = 13
    mot, _ = euler_factors(rank_one, p, range(2, p), N=20)
    F_ = frob(p, 20, "dwork", rank_one)
    ratios = {(specialize(F_, ef.t0)[0][0] * (-ef.coeffs[1])).lift_symmetric() for ef in mot}
    assert len(ratios) == 1


@given(st.sampled_from([5, 7, 11, 13, 17]), st.integers(2, 10**6))
def test_euler_properties(p, t):
    t0 = t % p
    if t0 in (0, 1):
        return
    ef = euler_factor(specialize(frob(p), t0), DATUM, p, t0)
    c1 = ef.coeffs[1]
    assert ef.coeffs[2] == p
    assert c1 * c1 <= 4 * p
    assert ef.sign == 1 and not ef.flags
    assert isqrt(4 * p) >= abs(c1)
