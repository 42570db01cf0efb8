from fractions import Fraction

import mpmath
import pytest

from halfint4 import forms, hecke
from halfint4.forms import MembershipError, eigen_space
from halfint4.qseries import PrecisionError, Series


def eta_product(exps, prec):
    """q^(sum m e / 24) prod_m prod_n (1 - q^(m n))^e as integer lists (shift dropped)."""
    out = [1] + [0] * (prec - 1)
    for m, e in exps:
        for n in range(1, prec):
            step = m * n
            if step >= prec:
                break
            for _ in range(e):
                for i in range(prec - 1, step - 1, -1):
                    out[i] -= out[i - step]
    return out


def ramanujan_tau(n):
    return eta_product([(1, 24)], n)[n - 1]


def level2_weight8_newform(n):
    # (eta(z) eta(2z))^8 = q - 8 q^2 + 12 q^3 + ...
    return eta_product([(1, 8), (2, 8)], n)[n - 1]



def _prov(k, sign, primes):
    s = eigen_space(k, sign)
    if s.dim == 0:
        return s
    return s.with_prec(max(hecke.required_prec(p, s.dim, max(s.pivots)) for p in primes))


def test_primes_and_legendre():
    assert hecke.odd_primes(5) == [3, 5, 7, 11, 13]
    assert not hecke.is_odd_prime(2) and not hecke.is_odd_prime(9)
    for p in (3, 5, 7, 11):
        for a in range(-20, 20):
            euler = pow(a % p, (p - 1) // 2, p)
            expected = 0 if a % p == 0 else (1 if euler == 1 else -1)
            assert hecke.legendre(a, p) == expected


def test_t_p2_coefficient_formula():
    f = forms.delta4(9 * 12)
    k, p = 3, 3
    got = hecke.t_p2_coeffs(f, p, k, 12)
    for n in range(12):
        exp = f.coeff(p * p * n) + hecke.legendre((-1) ** k * n, p) * p ** (k - 1) * f.coeff(n)
        if n % (p * p) == 0:
            exp += p ** (2 * k - 1) * f.coeff(n // (p * p))
        assert got.coeff(n) == exp


def test_t_p2_needs_input_precision():
    with pytest.raises(PrecisionError):
        hecke.t_p2_coeffs(forms.delta4(20), 3, 4, 10)


def test_matrix_requires_provisioned_space():
    with pytest.raises(PrecisionError):
        hecke.t_p2_matrix(eigen_space(8, 1, prec=20), 3)


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        hecke.t_p2_matrix(_prov(8, 1, (3,)), 9)


@pytest.mark.parametrize("k", range(4, 13))
@pytest.mark.parametrize("sign", (1, -1))
def test_hecke_matrices_commute(k, sign):
    s = _prov(k, sign, (3, 5))
    if s.dim == 0:
        return
    t3, t5 = hecke.t_p2_matrix(s, 3), hecke.t_p2_matrix(s, 5)
    assert t3.commutes_with(t5)
    assert len(t3.charpoly()) == s.dim + 1


def test_lambda3_weight_9_2_matches_level2_newform():
    (ef,) = hecke.eigen_decompose(_prov(4, 1, (3,)), (3,))
    assert ef.exact and ef.eigenvalues[3] == level2_weight8_newform(3) == 12


def test_lambda3_weight_13_2_minus_is_tau3():
    (ef,) = hecke.eigen_decompose(_prov(6, -1, (3, 5)), (3, 5))
    assert ef.eigenvalues[3] == ramanujan_tau(3) == 252
    assert ef.eigenvalues[5] == ramanujan_tau(5)


def test_weight_17_2_plus_eigenvalues():
    efs = hecke.eigen_decompose(_prov(8, 1, (3, 5)), (3, 5))
    assert sorted(ef.eigenvalues[3] for ef in efs) == [-3348, 6252]
    assert all(ef.exact for ef in efs)
    # a(1) = 1 normalisation
    assert all(ef.series().coeff(1) == 1 for ef in efs)


def test_irrational_eigenvalues_are_embedded():
    s = _prov(12, 1, (3,)).with_prec(9 * 101)
    efs = hecke.eigen_decompose(s, (3,), bits=128)
    assert len(efs) == s.dim
    cp = hecke.t_p2_matrix(s, 3).charpoly()
    for ef in efs:
        with mpmath.workprec(200):
            lam = ef.eigenvalues[3]
            lam = mpmath.mpf(lam.numerator) / lam.denominator if ef.exact else mpmath.mpf(lam)
            val = sum(mpmath.mpf(c.numerator) / c.denominator * lam ** (len(cp) - 1 - i)
                      for i, c in enumerate(cp))
            assert abs(val) < mpmath.mpf(10) ** -15 * (1 + abs(lam)) ** (len(cp) - 1)
        assert hecke.eigen_ratio_deviation(ef, 3, 100) < 1e-20
    assert not all(ef.exact for ef in efs)


def test_plus_and_minus_share_eigenvalues_at_weight_25_2():
    # both spaces carry the same irrational pair coming from one Galois orbit
    plus = hecke.eigen_decompose(_prov(12, 1, (3,)), (3,))
    minus = hecke.eigen_decompose(_prov(12, -1, (3,)), (3,))
    irr = lambda efs: sorted(float(ef.eigenvalues[3]) for ef in efs if not ef.exact)
    assert irr(plus) == pytest.approx(irr(minus), rel=1e-12) and irr(plus)


def test_eigen_ratio_exact_is_zero():
    (ef,) = hecke.eigen_decompose(_prov(4, 1, (3,)).with_prec(9 * 101), (3,))
    assert hecke.eigen_ratio_deviation(ef, 3, 100) == 0


def test_express_in_eigenbasis_roundtrip():
    s = _prov(8, 1, (3,))
    efs = hecke.eigen_decompose(s, (3,))
    _, g = forms.plus_form(8, s.prec)
    c = hecke.express_in_eigenbasis(g, efs)
    rebuilt = Series.zero(s.prec)
    for ci, ef in zip(c, efs):
        rebuilt = rebuilt + ef.series().scale(ci)
    assert rebuilt == g


def test_express_rejects_non_members():
    s = _prov(8, 1, (3,))
    efs = hecke.eigen_decompose(s, (3,))
    with pytest.raises(MembershipError):
        hecke.express_in_eigenbasis(forms.theta(s.prec), efs)


def test_zero_space_has_no_eigenforms():
    assert hecke.eigen_decompose(eigen_space(4, -1), (3,)) == []
