"""Small exact linear algebra over Q.

Matrices are lists of rows of :class:`fractions.Fraction`. Everything here is
sized for the spaces at hand (dimension at most a few dozen), so plain
Gauss-Jordan elimination is enough.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum((a[i][t] * b[t][j] for t in range(inner)), Fraction(0)) for j in range(cols)]
            for i in range(len(a))]


def matvec(a: Matrix, v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scalar(c, a: Matrix) -> Matrix:
    c = Fraction(c)
    return [[c * x for x in row] for row in a]


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    a = [list(row) for row in m]
    if not a:
        return a, []
    nrows, ncols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullspace(m: Matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {v : m v = 0}; ``ncols`` is needed when ``m`` has no rows."""
    if ncols is None:
        ncols = len(m[0])
    if not m:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    r, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(r, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def charpoly(m: Matrix) -> list[Fraction]:
    """Characteristic polynomial det(xI - m), coefficients from x**n down to x**0.

    Faddeev-LeVerrier recursion; every division is by an integer so the
    result stays exact.
    """
    n = len(m)
    coeffs = [Fraction(1)]
    if n == 0:
        return coeffs
    ck = Fraction(1)
    prod = identity(n)
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(A M_k)/k
        if k == 1:
            mk = identity(n)
        else:
            mk = [[prod[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
        prod = matmul(m, mk)
        ck = -sum((prod[i][i] for i in range(n)), Fraction(0)) / k
        coeffs.append(ck)
    return coeffs


def poly_eval(p: Sequence, x):
    acc = 0 * x
    for c in p:
        acc = acc * x + c
    return acc


def _strip(p: list[Fraction]) -> list[Fraction]:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = _strip([Fraction(x) for x in a])
    b = _strip([Fraction(x) for x in b])
    if len(b) == 1 and b[0] == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = a[:]
    for i in range(len(q)):
        c = r[i] / b[0]
        q[i] = c
        for j, bj in enumerate(b):
            r[i + j] -= c * bj
    r = _strip(r[len(q):]) if len(r) > len(q) else [Fraction(0)]
    return q, r


def poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    """Monic gcd over Q."""
    a = _strip([Fraction(x) for x in a])
    b = _strip([Fraction(x) for x in b])
    while not (len(b) == 1 and b[0] == 0):
        _, r = poly_divmod(a, b)
        a, b = b, r
    return [c / a[0] for c in a]


def poly_derivative(p: Sequence[Fraction]) -> list[Fraction]:
    n = len(p) - 1
    if n == 0:
        return [Fraction(0)]
    return [Fraction(c) * (n - i) for i, c in enumerate(p[:-1])]


def is_squarefree(p: Sequence[Fraction]) -> bool:
    if len(p) <= 2:
        return True
    return len(poly_gcd(p, poly_derivative(p))) == 1
