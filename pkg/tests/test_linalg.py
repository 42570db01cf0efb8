from fractions import Fraction

from hypothesis import given, strategies as st

from halfint4 import linalg

entry = st.integers(-6, 6).map(Fraction)


@st.composite
def square(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    return [[draw(entry) for _ in range(n)] for _ in range(n)]


def det(m):
    r = [list(row) for row in m]
    n, d = len(r), Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if r[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            r[c], r[p] = r[p], r[c]
            d = -d
        d *= r[c][c]
        for i in range(c + 1, n):
            f = r[i][c] / r[c][c]
            r[i] = [x - f * y for x, y in zip(r[i], r[c])]
    return d


@given(square(), st.integers(-4, 4))
def test_charpoly_is_determinant(m, x):
    n = len(m)
    shifted = [[(x if i == j else 0) - m[i][j] for j in range(n)] for i in range(n)]
    assert linalg.poly_eval(linalg.charpoly(m), Fraction(x)) == det(shifted)


@given(square())
def test_nullspace_and_rank(m):
    ns = linalg.nullspace(m)
    assert len(ns) + linalg.rank(m) == len(m[0])
    for v in ns:
        assert all(x == 0 for x in linalg.matvec(m, v))


@given(st.lists(entry, min_size=1, max_size=6), st.lists(entry, min_size=1, max_size=4))
def test_poly_divmod_reconstructs(a, b):
    if all(c == 0 for c in b):
        return
    q, r = linalg.poly_divmod(a, b)
    assert len(r) < len(b) or r == [0]
    for x in map(Fraction, range(-3, 4)):
        ev = linalg.poly_eval
        assert ev(a, x) == ev(q, x) * ev(b, x) + ev(r, x)


def test_squarefree():
    assert linalg.is_squarefree([1, 0, -1])
    assert not linalg.is_squarefree([1, -2, 1])
