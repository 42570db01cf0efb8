from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from halfint4 import _backend, _kernels_py
from halfint4.qseries import PrecisionError, Series, pow_, v_operator

small_int = st.integers(-50, 50)
rational = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def series(draw, prec=None):
    n = prec or draw(st.integers(1, 24))
    return Series(draw(st.lists(rational, min_size=n, max_size=n)))


@st.composite
def same_prec(draw, count):
    n = draw(st.integers(1, 24))
    return [draw(series(prec=n)) for _ in range(count)]


def naive_mul(a, b):
    n = min(a.prec, b.prec)
    out = [sum((a.coeff(i) * b.coeff(k - i) for i in range(k + 1)), Fraction(0)) for k in range(n)]
    return Series(out)


def test_docstring_example():
    s = Series([1, 2, 0, 0, 2])
    assert s.prec == 5 and s.coeff(4) == 2


def test_coefficient_beyond_precision_raises():
    s = Series([1, 2, 3])
    with pytest.raises(PrecisionError):
        s.coeff(3)
    with pytest.raises(PrecisionError):
        s.truncate(4)


def test_float_coefficients_rejected():
    with pytest.raises(TypeError):
        Series([0.5, 1])


def test_lowest_terms_storage():
    s = Series([Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)])
    assert s.denominator == 6 and s.numerators == (3, 2, 4)
    assert (s.scale(6)).is_integral()


def test_precision_is_minimum():
    a, b = Series([1, 1, 1, 1]), Series([1, 2])
    assert (a + b).prec == 2 and (a * b).prec == 2


def test_valuation_of_zero_is_infinite():
    assert Series.zero(5).valuation() == float("inf")
    assert Series([0, 0, 3]).valuation() == 2


@given(same_prec(3))
def test_ring_axioms(abc):
    a, b, c = abc
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Series.zero(a.prec)
    assert a * Series.one(a.prec) == a


@given(same_prec(2))
def test_product_matches_definition(ab):
    a, b = ab
    assert a * b == naive_mul(a, b)


@given(series(), st.integers(0, 5))
def test_power_matches_repeated_product(a, e):
    expected = Series.one(a.prec)
    for _ in range(e):
        expected = expected * a
    assert pow_(a, e) == expected


@given(same_prec(2), st.integers(1, 5))
def test_v_operator_is_a_ring_map(ab, m):
    a, b = ab
    assert v_operator(a * b, m) == v_operator(a, m) * v_operator(b, m)
    assert v_operator(a + b, m) == v_operator(a, m) + v_operator(b, m)


@given(series(), st.integers(1, 30))
def test_truncation_commutes_with_product(a, n):
    n = min(n, a.prec)
    assert (a * a).truncate(n) == a.truncate(n) * a.truncate(n)


big_int = st.integers(-(2 ** 140), 2 ** 140)


@given(st.lists(small_int, min_size=1, max_size=80), st.lists(small_int, min_size=1, max_size=80))
def test_backends_agree_small(a, b):
    n = min(len(a), len(b))
    ref = _kernels_py.schoolbook(a, b, n)
    assert _kernels_py.kronecker(a, b, n) == ref
    assert _kernels_py.convolve(a, b, n) == ref
    assert _backend.convolve(a, b, n) == ref


@given(st.lists(big_int, min_size=1, max_size=40), st.lists(big_int, min_size=1, max_size=40))
def test_backends_agree_bignum(a, b):
    n = min(len(a), len(b))
    ref = _kernels_py.schoolbook(a, b, n)
    assert _kernels_py.kronecker(a, b, n) == ref
    assert _backend.convolve(a, b, n) == ref


def test_int128_path_boundary():
    # products just above 2^63 exercise the 128-bit accumulator
    a = [2 ** 40 + i for i in range(200)]
    b = [-(2 ** 30) + 7 * i for i in range(200)]
    assert _backend.convolve(a, b, 200) == _kernels_py.schoolbook(a, b, 200)


def test_sigma1_tables_agree():
    ref = [0] + [sum(d for d in range(1, n + 1) if n % d == 0) for n in range(1, 300)]
    assert _kernels_py.sigma1_table(300) == ref
    assert _backend.sigma1_table(300) == ref
