from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from halfint4 import forms, lfunction as L
from halfint4.forms import D2, DELTA4, THETA, DomainError, Weight, w4
from halfint4.qseries import PrecisionError

W9 = Weight.half_integral(4)
W13 = Weight.half_integral(6)


@pytest.fixture(scope="module")
def f1():
    return (THETA * DELTA4).series(400)


@pytest.fixture(scope="module")
def f2():
    return (THETA * D2 * DELTA4).series(400)


def rel(a, b):
    return abs(a - b) / max(abs(b), mpmath.mpf(10) ** -60)


# -- incomplete gamma --------------------------------------------------------


@pytest.mark.parametrize("s,x", [
    ("2.25", "3.14159"), ("-2", "3.14159"), ("13", "3.14159"), ("2+3i", "3.14159"),
    ("-10.5", "3.14159"), ("0.5", "100"), ("6.5", "0.3"), ("-0.75", "0.05"),
    ("1-4i", "9.42"), ("20.25", "6.28"), ("-7.25+2i", "12.5"),
])
def test_gamma_upper_against_mpmath(s, x):
    with mpmath.workprec(160):
        s_, x_ = L.to_mp(s), L.to_mp(x)
        ref = mpmath.gammainc(s_, a=x_)
        assert rel(L.gamma_upper(s_, x_, 128), ref) < 1e-36


@given(st.floats(0.01, 60))
def test_gamma_upper_half_is_erfc(x):
    with mpmath.workprec(160):
        x = mpmath.mpf(x)
        ref = mpmath.sqrt(mpmath.pi) * mpmath.erfc(mpmath.sqrt(x))
        assert rel(L.gamma_upper(mpmath.mpf(0.5), x, 128), ref) < 1e-34


@given(st.floats(0.01, 60))
def test_gamma_upper_zero_is_e1(x):
    with mpmath.workprec(160):
        x = mpmath.mpf(x)
        assert rel(L.gamma_upper(0, x, 128), mpmath.e1(x)) < 1e-34


@given(st.floats(-15, 15), st.floats(0.05, 40))
def test_gamma_upper_recurrence(s, x):
    # Gamma(s+1, x) = s Gamma(s, x) + x^s e^-x
    with mpmath.workprec(160):
        s, x = mpmath.mpf(s), mpmath.mpf(x)
        lhs = L.gamma_upper(s + 1, x, 128)
        rhs = s * L.gamma_upper(s, x, 128) + x ** s * mpmath.exp(-x)
        assert abs(lhs - rhs) <= 1e-30 * (abs(lhs) + abs(x ** s * mpmath.exp(-x)))


def test_gamma_complete_pole():
    with pytest.raises(ValueError):
        L.gamma_complete(-3)


# -- parsing -------------------------------------------------------------------


@pytest.mark.parametrize("text,value", [
    ("1+2i", mpmath.mpc(1, 2)), ("-3i", mpmath.mpc(0, -3)), ("2.5", mpmath.mpf(2.5)),
    ("i", mpmath.mpc(0, 1)), ("1/4-i", mpmath.mpc(0.25, -1)),
])
def test_to_mp_parses(text, value):
    assert L.to_mp(text) == value


# -- f(it) -----------------------------------------------------------------------


def test_eval_form_direct_sum(f1):
    with mpmath.workprec(200):
        t = mpmath.mpf("0.8")
        ref = sum(mpmath.mpf(c.numerator) / c.denominator * mpmath.exp(-2 * mpmath.pi * n * t)
                  for n, c in enumerate(f1.coeffs))
    fv = L.eval_form(f1, W9, "0.8", 128)
    assert abs(fv.value - ref) <= fv.tail_bound + mpmath.mpf(2) ** -120


def test_eval_form_reports_missing_precision():
    with pytest.raises(PrecisionError, match="coefficients"):
        L.eval_form(forms.delta4(10), 4, "0.05", 128)


@pytest.mark.parametrize("t", ["0.3", "0.6", "1.4"])
def test_theta_delta4_is_fricke_invariant_numerically(f1, t):
    # (2t)^(-9/2) f(i/(4t)) = f(it) for f = theta Delta4
    with mpmath.workprec(160):
        t = mpmath.mpf(t)
        lhs = (2 * t) ** mpmath.mpf(-4.5) * L.eval_form(f1, W9, 1 / (4 * t), 128).value
        rhs = L.eval_form(f1, W9, t, 128).value
        assert rel(lhs, rhs) < 1e-25


# -- L* ------------------------------------------------------------------------


def test_lstar_requires_cusp_form():
    th = forms.theta(200)
    with pytest.raises(DomainError):
        L.lstar_generic(th, th, Weight(1), 1, 128)


def test_lstar_dirichlet_series_oracle(f1):
    # for large s: L* = pi^-s Gamma(s) sum a(n) n^-s
    s = 20
    with mpmath.workprec(200):
        dsum = sum(mpmath.mpf(c.numerator) / c.denominator * mpmath.mpf(n) ** -s
                   for n, c in enumerate(f1.coeffs) if n)
        ref = mpmath.pi ** -s * mpmath.gamma(s) * dsum
    lv = L.lstar_eigen(f1, W9, 1, s, 128)
    assert rel(lv.value, ref) < 1e-28


@pytest.mark.parametrize("s", ["-2", "0", "2.25", "5", "1+2i", "3-4i"])
def test_gamma_series_matches_quadrature(f1, s):
    g = L.lstar_eigen(f1, W9, 1, s, 128)
    q = L.lstar_quadrature(f1, 1, W9, s, 128)
    assert abs(g.value - q.value) <= g.error_budget + q.error_budget
    assert abs(g.value - q.value) < 1e-25 * max(1, abs(g.value))


@pytest.mark.parametrize("split", [Fraction(1, 4), Fraction(3, 5), Fraction(1), Fraction(2)])
def test_value_independent_of_split_point(f1, split):
    a = L.lstar_eigen(f1, W9, 1, "1.5+0.5i", 128)
    b = L.lstar_generic(f1, 1, W9, "1.5+0.5i", 128, split=split)
    assert abs(a.value - b.value) <= a.error_budget + b.error_budget


def test_functional_equation_residual_detects_wrong_partner(f2):
    assert L.functional_equation_residual(f2, -1, W13, "1+2i", 128) < 1e-25
    assert L.functional_equation_residual(f2, 1, W13, "1+2i", 128) > 1e-6


def test_functional_equation_generic_pair():
    e = THETA ** 3 * DELTA4 * (THETA ** 4 + forms.F2 * 3)
    f, g = e.series(400), w4(e).series(400)
    w = Weight(e.twice_weight)
    assert e != w4(e)
    for s in ("0.5", "2+1i", "7.25"):
        assert L.functional_equation_residual(f, g, w, s, 128) < 1e-25


def test_more_terms_change_nothing(f1):
    a = L.lstar_eigen(f1, W9, 1, "2.25", 128)
    b = L.lstar_eigen(f1, W9, 1, "2.25", 128, _n_terms=2 * a.terms_used + 2)
    assert abs(a.value - b.value) <= a.error_budget


def test_higher_precision_within_budget(f1):
    a = L.lstar_eigen(f1, W9, 1, "-1.75", 128)
    b = L.lstar_eigen(f1, W9, 1, "-1.75", 192)
    assert abs(a.value - b.value) <= a.error_budget
    assert b.error_budget < a.error_budget


def test_regression_value(f1):
    with mpmath.workprec(128):
        ref = mpmath.mpf("0.15918853961073416851")
        assert abs(L.lstar_eigen(f1, W9, 1, -2, 128).value - ref) < 1e-19


def test_central_zero_is_exact_for_minus_forms(f2):
    lv = L.lstar_eigen(f2, W13, -1, Fraction(13, 4), 128)
    assert lv.value == 0 and lv.sign() == 0


@pytest.mark.parametrize("sigma", [Fraction(j, 4) for j in range(-8, 41, 3)])
def test_f1_positive_on_the_real_line(f1, sigma):
    assert L.lstar_eigen(f1, W9, 1, sigma, 128).sign() == 1


@pytest.mark.parametrize("sigma", [Fraction(j, 4) for j in range(-8, 41, 3)])
def test_f2_sign_flips_at_centre(f2, sigma):
    sign = L.lstar_eigen(f2, W13, -1, sigma, 128).sign()
    assert sign == (1 if sigma > Fraction(13, 4) else -1 if sigma < Fraction(13, 4) else 0)


def test_scan_and_sign_changes(f2):
    pts = L.scan_real(f2, W13, -1, -2, 7, Fraction(1, 4), 128)
    assert len(pts) == 37
    assert L.sign_changes(pts) == [(Fraction(3), Fraction(7, 2))]
    assert L.scan_real(f2, W13, -1, 3, 3, Fraction(1, 4), 128) == []


def test_scan_rejects_bad_step(f2):
    with pytest.raises(ValueError):
        L.scan_real(f2, W13, -1, 0, 1, 0, 128)


def test_precision_error_for_short_series():
    f = (THETA * DELTA4).series(5)
    with pytest.raises(PrecisionError):
        L.lstar_eigen(f, W9, 1, 2, 128)
