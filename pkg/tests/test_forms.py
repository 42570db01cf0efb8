from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from halfint4 import forms
from halfint4.forms import (D2, DELTA4, F2, THETA, DomainError, MembershipError, RingElement, Weight,
                            cusp_dimension, cusp_space, eigen_space, w4)
from halfint4.qseries import PrecisionError, Series


def sigma1(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


def test_theta_is_sum_over_squares():
    t = forms.theta(50)
    assert [n for n in range(50) if t.coeff(n)] == [n for n in range(50) if round(n ** 0.5) ** 2 == n]
    assert t.coeff(0) == 1 and all(t.coeff(m * m) == 2 for m in range(1, 8))


def test_f2_odd_divisor_sums():
    f = forms.f2(200)
    assert all(f.coeff(n) == (sigma1(n) if n % 2 else 0) for n in range(200))


def test_f2_two_constructions_agree():
    assert forms.f2(500) == forms.f2_closed_form(500)


def test_delta4_leading_coefficients():
    assert forms.delta4(8).coeffs[:6] == (0, 1, -8, 28, -64, 126)


def test_delta4_product_formula():
    assert forms.delta4(500) == forms.delta4_product(500)


def test_d2_expansion():
    assert forms.d2(6).coeffs == (1, -24, 24, -96, 24, -144)


def test_quasi_eisenstein_p():
    p = forms.quasi_eisenstein_p(30)
    assert p.coeff(0) == 1 and all(p.coeff(n) == -24 * sigma1(n) for n in range(1, 30))


def test_weight_type():
    w = Weight.half_integral(4)
    assert str(w) == "9/2" and w.is_half_integral and w.k == 4 and w.value == Fraction(9, 2)
    assert Weight.integral(2) + Weight.half_integral(0) == Weight.half_integral(2)
    with pytest.raises(ValueError):
        Weight(-1)


def test_named_forms_are_ring_elements():
    assert DELTA4 == F2 * (THETA ** 4 - F2 * 16)
    assert D2.series(40) == forms.d2(40)
    assert DELTA4.series(40) == forms.delta4(40)


@pytest.mark.parametrize("k", range(0, 31))
def test_cusp_dimension(k):
    assert cusp_space(k).dim == cusp_dimension(k) == max(0, k // 2 - 1)


@pytest.mark.parametrize("k", range(0, 16))
def test_eigenspaces_split_cusp_space(k):
    assert eigen_space(k, 1).dim + eigen_space(k, -1).dim == cusp_dimension(k)


def test_trivial_spaces_below_thresholds():
    assert all(eigen_space(k, 1).dim == 0 for k in range(4))
    assert all(eigen_space(k, -1).dim == 0 for k in range(6))
    assert eigen_space(4, 1).dim == 1 and eigen_space(6, -1).dim == 1


def test_small_eigenspaces_are_the_named_forms():
    assert eigen_space(4, 1).basis == (THETA * DELTA4,)
    assert eigen_space(6, -1).basis == (THETA * D2 * DELTA4,)


@st.composite
def ring_elements(draw, twice_weight=None):
    tw = twice_weight or draw(st.integers(1, 30))
    coords = draw(st.lists(st.fractions(-9, 9, max_denominator=5),
                           min_size=len(forms.monomials(tw)), max_size=len(forms.monomials(tw))))
    return RingElement.from_coordinates(tw, coords)


@given(ring_elements())
def test_w4_is_an_involution(e):
    assert w4(w4(e)) == e


@given(ring_elements(), ring_elements())
def test_w4_is_multiplicative(e1, e2):
    assert w4(e1 * e2) == w4(e1) * w4(e2)


def test_w4_on_generators():
    assert w4(THETA) == THETA
    assert w4(F2) == THETA ** 4 * Fraction(1, 16) - F2
    assert w4(DELTA4) == DELTA4
    assert w4(D2) == -D2


def test_w4_matrix_columns_are_images():
    tw = 13
    m = forms.w4_matrix(tw)
    for j, (a, b) in enumerate(forms.monomials(tw)):
        img = w4(RingElement.monomial(a, b)).coordinates()
        assert [row[j] for row in m] == img


@given(ring_elements(twice_weight=17))
def test_series_of_product_is_product_of_series(e):
    prec = 30
    assert (e * THETA).series(prec) == e.series(prec) * forms.theta(prec)


def test_echelon_basis_properties():
    space = cusp_space(14)
    vals = [s.valuation() for s in space.series]
    assert vals == sorted(vals) and len(set(vals)) == len(vals)
    for s, v in zip(space.series, vals):
        assert s.coeff(v) == 1
        for other in space.series:
            if other is not s:
                assert other.coeff(v) == 0


def test_membership_roundtrip():
    space = eigen_space(10, 1, prec=40)
    coords = [Fraction(3, 2), Fraction(-7)][:space.dim]
    f = space.element(coords).series(40)
    assert space.coordinates(f) == coords
    assert not space.contains(forms.theta(40))
    with pytest.raises(MembershipError):
        space.coordinates(forms.theta(40))


def test_echelonize_needs_separating_precision():
    with pytest.raises(PrecisionError):
        forms.echelonize([THETA ** 5 * F2, THETA * F2 ** 2], 2)


def test_product_forms():
    e, s = forms.plus_form(4, 20)
    assert e == THETA * DELTA4
    e, s = forms.minus_form(6, 20)
    assert e == THETA * D2 * DELTA4
    with pytest.raises(DomainError):
        forms.plus_form(3, 10)
    with pytest.raises(DomainError, match="k >= 6 required"):
        forms.minus_form(5, 10)


@pytest.mark.parametrize("k", range(4, 12))
def test_product_forms_live_in_the_right_space(k):
    e, s = forms.plus_form(k, 60)
    assert w4(e) == e and eigen_space(k, 1, 60).contains(s)
    if k >= 6:
        e, s = forms.minus_form(k, 60)
        assert w4(e) == -e and eigen_space(k, -1, 60).contains(s)


def test_multiplication_by_theta_delta4_is_onto_cusp_forms():
    for k in range(1, 8):
        full = forms.monomial_space(Weight.integral(k))
        images = [b * THETA * DELTA4 for b in full.basis]
        target = cusp_space(k + 4)
        assert len(images) == target.dim
        assert forms.linalg.rank([im.coordinates() for im in images]) == target.dim
        assert all(target.contains(im.series(target.prec)) for im in images)

