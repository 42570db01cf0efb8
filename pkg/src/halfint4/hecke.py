"""Hecke operators T(p^2) on half-integral weight cusp forms of level 4.

On q-expansions, for an odd prime p and weight k + 1/2,

    b(n) = a(p^2 n) + ((-1)^k n / p) p^(k-1) a(n) + p^(2k-1) a(n / p^2),

with the Legendre symbol in the middle and a(n / p^2) = 0 unless p^2 | n.
The formula is never trusted on its own: every matrix is built by pivot
matching and then checked against all remaining known coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import mp

from . import linalg
from .forms import FormSpace, MembershipError
from .qseries import PrecisionError, Series

__all__ = [
    "HeckeMatrix", "Eigenform", "EigenError", "legendre", "is_odd_prime", "odd_primes",
    "t_p2_coeffs", "t_p2_numeric", "t_p2_matrix", "required_prec", "eigen_decompose",
    "express_in_eigenbasis", "eigen_ratio_deviation",
]


class EigenError(RuntimeError):
    """A simultaneous eigenbasis could not be separated or validated."""


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def odd_primes(count: int, start: int = 3) -> list[int]:
    out, p = [], max(start, 3)
    while len(out) < count:
        if is_odd_prime(p):
            out.append(p)
        p += 1
    return out


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _check_prime(p: int) -> None:
    if not is_odd_prime(p):
        raise ValueError(f"T(p^2) needs an odd prime p, got {p}")


def required_prec(p: int, dim: int, max_valuation: int) -> int:
    """Series precision needed to build and check a T(p^2) matrix."""
    return p * p * (dim + max_valuation) + 8


def t_p2_coeffs(f: Series, p: int, k: int, prec_out: int | None = None) -> Series:
    """Exact q-expansion of T(p^2) f for f of weight k + 1/2."""
    _check_prime(p)
    p2 = p * p
    if prec_out is None:
        prec_out = f.prec // p2
    if prec_out < 1 or f.prec < p2 * prec_out:
        raise PrecisionError(
            f"T({p}^2) to O(q^{prec_out}) needs input precision {p2 * max(prec_out, 1)}, got {f.prec}")
    a = f.numerators
    mid = p ** (k - 1) if k >= 1 else Fraction(1, p ** (1 - k))
    top = p ** (2 * k - 1) if k >= 1 else Fraction(1, p)
    eps = -1 if k % 2 else 1
    out = []
    for n in range(prec_out):
        v = a[p2 * n] + legendre(eps * n, p) * mid * a[n]
        if n % p2 == 0:
            v += top * a[n // p2]
        out.append(v)
    return Series(out).scale(Fraction(1, f.denominator))


def t_p2_numeric(coeffs: Sequence, p: int, k: int, n_max: int) -> list:
    """T(p^2) applied to an embedded (floating) coefficient list, for 0 <= n <= n_max."""
    _check_prime(p)
    p2 = p * p
    if len(coeffs) <= p2 * n_max:
        raise PrecisionError(f"need {p2 * n_max + 1} coefficients, got {len(coeffs)}")
    eps = -1 if k % 2 else 1
    mid = mpmath.mpf(p) ** (k - 1)
    top = mpmath.mpf(p) ** (2 * k - 1)
    out = []
    for n in range(n_max + 1):
        v = coeffs[p2 * n] + legendre(eps * n, p) * mid * coeffs[n]
        if n % p2 == 0:
            v += top * coeffs[n // p2]
        out.append(v)
    return out


@dataclass(frozen=True)
class HeckeMatrix:
    """Exact matrix of T(p^2) in the echelon basis of ``space``.

    Column ``j`` holds the coordinates of T(p^2) applied to ``space.basis[j]``.
    """

    p: int
    k: int
    space: FormSpace = field(repr=False)
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.entries)

    def rows(self) -> linalg.Matrix:
        return [list(r) for r in self.entries]

    def __matmul__(self, other: "HeckeMatrix") -> linalg.Matrix:
        return linalg.matmul(self.rows(), other.rows())

    def commutes_with(self, other: "HeckeMatrix") -> bool:
        return (self @ other) == (other @ self)

    def charpoly(self) -> list[Fraction]:
        return linalg.charpoly(self.rows())


def t_p2_matrix(space: FormSpace, p: int) -> HeckeMatrix:
    """Matrix of T(p^2) on a cusp or W4-eigen space, with a full membership check."""
    _check_prime(p)
    if space.kind not in ("cusp", "plus", "minus"):
        raise ValueError("T(p^2) matrices are built on cusp, plus or minus spaces")
    k = space.k
    d = space.dim
    if d == 0:
        return HeckeMatrix(p, k, space, ())
    need = p * p * (max(space.pivots) + 1)
    if space.prec < need:
        raise PrecisionError(
            f"T({p}^2) on this space needs series precision >= {need} "
            f"(recommended {required_prec(p, d, max(space.pivots))}), got {space.prec}")
    cols = []
    for s in space.series:
        image = t_p2_coeffs(s, p, k)
        try:
            cols.append(space.coordinates(image))
        except MembershipError as exc:
            raise MembershipError(f"T({p}^2) image not in space: {exc}") from None
    entries = tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))
    return HeckeMatrix(p, k, space, entries)


# -- eigenforms --------------------------------------------------------------


@dataclass(frozen=True)
class Eigenform:
    """A simultaneous T(p^2) eigenform inside ``space``.

    ``coords`` are over ``space.basis``; they are Fractions when ``exact``.
    ``coeffs`` are the embedded Fourier coefficients a(0..prec-1).
    """

    space: FormSpace = field(repr=False)
    primes: tuple[int, ...]
    coords: tuple
    eigenvalues: dict
    coeffs: tuple = field(repr=False)
    exact: bool
    bits: int

    @property
    def prec(self) -> int:
        return len(self.coeffs)

    def series(self) -> Series:
        """Exact q-expansion; only available for rational eigenforms."""
        if not self.exact:
            raise ValueError("eigenform has irrational coefficients")
        out = Series.zero(self.space.prec)
        for c, s in zip(self.coords, self.space.series):
            out = out + s.scale(c)
        return out

    def element(self):
        if not self.exact:
            raise ValueError("eigenform has irrational coefficients")
        return self.space.element(self.coords)


def _normalizer(values: Sequence, prec_hint: int, zero_tol) -> int:
    # index of a(1) if nonzero, else of the first nonzero coefficient
    if prec_hint > 1 and abs(values[1]) > zero_tol:
        return 1
    for n, v in enumerate(values):
        if abs(v) > zero_tol:
            return n
    raise EigenError("eigenvector is numerically zero")


def _embed(space: FormSpace, coords: Sequence) -> list:
    out = [mpmath.mpf(0)] * space.prec
    for c, s in zip(coords, space.series):
        if not c:
            continue
        d = s.denominator
        cc = mpmath.mpf(c) if not isinstance(c, Fraction) else mpmath.mpf(c.numerator) / c.denominator
        for n, a in enumerate(s.numerators):
            if a:
                out[n] += cc * a / d
    return out


def _exact_coeffs(space: FormSpace, coords: Sequence[Fraction]) -> list[Fraction]:
    out = Series.zero(space.prec)
    for c, s in zip(coords, space.series):
        out = out + s.scale(c)
    return list(out.coeffs)


def _to_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    v = Fraction(man) * Fraction(2) ** exp
    return -v if sign else v


def _rational_root(charpoly: Sequence[Fraction], approx) -> Fraction | None:
    # a monic rational polynomial times the lcm D of its denominators is integral
    # with leading coefficient D, so rational roots have denominator dividing D
    d = 1
    for c in charpoly:
        d = d * c.denominator // math.gcd(d, c.denominator)
    r = _to_fraction(mpmath.re(approx)).limit_denominator(d)
    return r if linalg.poly_eval(charpoly, r) == 0 else None


def _numeric_nullvector(m: linalg.Matrix, lam) -> list:
    n = len(m)
    a = mpmath.matrix(n, n)
    for i in range(n):
        for j in range(n):
            x = m[i][j]
            a[i, j] = mpmath.mpf(x.numerator) / x.denominator - (lam if i == j else 0)
    _, _, v = mpmath.svd_r(a)
    return [v[n - 1, j] for j in range(n)]


def _splitting_operator(mats: dict[int, HeckeMatrix], primes: list[int]):
    """A rational combination of T(p^2) with squarefree characteristic polynomial."""
    first = mats[primes[0]].rows()
    op = first
    cp = linalg.charpoly(op)
    if linalg.is_squarefree(cp):
        return op, cp, [primes[0]]
    used = [primes[0]]
    for q in primes[1:]:
        used.append(q)
        mq = mats[q].rows()
        for c in (1, 2, 3, 5, 7, 11):
            cand = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(op, mq)]
            cp2 = linalg.charpoly(cand)
            if linalg.is_squarefree(cp2):
                return cand, cp2, used
        op = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(op, mq)]
    g = linalg.poly_gcd(cp, linalg.poly_derivative(cp))
    raise EigenError(
        f"T(p^2) for p in {used} leave a repeated eigenvalue block; "
        f"repeated factor of the characteristic polynomial: {[str(c) for c in g]}")


def eigen_decompose(space: FormSpace, primes: Sequence[int] = (3,), bits: int = 128,
                    extra_primes: int = 4) -> list[Eigenform]:
    """Simultaneous eigenbasis of the T(p^2), p in ``primes``.

    If the first operator has a repeated eigenvalue, further primes are
    brought in (``extra_primes`` beyond those given) until the joint
    eigenvalues separate. Eigenvalues that are rational are recognised and
    the corresponding eigenforms are returned exactly.
    """
    primes = list(dict.fromkeys(primes))
    if not primes:
        raise ValueError("at least one prime is required")
    for p in primes:
        _check_prime(p)
    d = space.dim
    if d == 0:
        return []
    pool = primes + [q for q in odd_primes(len(primes) + extra_primes) if q not in primes][:extra_primes]
    mats: dict[int, HeckeMatrix] = {}
    for p in primes:
        mats[p] = t_p2_matrix(space, p)

    if d == 1:
        coords = (Fraction(1),)
        return [_make_exact(space, primes, coords, mats, bits)]

    def mats_for(ps):
        for q in ps:
            if q not in mats:
                mats[q] = t_p2_matrix(space, q)
        return mats

    op = cp = None
    for upto in range(len(primes), len(pool) + 1):
        try:
            op, cp, _ = _splitting_operator(mats_for(pool[:upto]), pool[:upto])
            break
        except EigenError:
            if upto == len(pool):
                raise
    guard = 64
    out = []
    with mp.workprec(bits + guard):
        roots = mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator for c in cp],
                                 maxsteps=200, extraprec=2 * (bits + guard))
        roots = sorted(roots, key=lambda r: (mpmath.re(r), mpmath.im(r)))
        for r in roots:
            if abs(mpmath.im(r)) > mpmath.mpf(2) ** (-(bits // 2)) * (1 + abs(r)):
                raise EigenError(f"non-real eigenvalue {r} for a Hecke operator")
            rat = _rational_root(cp, r)
            if rat is not None:
                ns = linalg.nullspace([[x - (rat if i == j else 0) for j, x in enumerate(row)]
                                       for i, row in enumerate(op)], d)
                if len(ns) != 1:
                    raise EigenError(f"eigenvalue {rat} has multiplicity {len(ns)}")
                out.append(_make_exact(space, primes, tuple(ns[0]), mats, bits))
            else:
                v = _numeric_nullvector(op, mpmath.re(r))
                out.append(_make_numeric(space, primes, v, mats, bits, guard))
    return out


def _make_exact(space, primes, coords, mats, bits) -> Eigenform:
    coeffs = _exact_coeffs(space, coords)
    idx = _normalizer(coeffs, space.prec, 0)
    scale = 1 / coeffs[idx]
    coords = tuple(c * scale for c in coords)
    coeffs = [c * scale for c in coeffs]
    eig = {}
    for p in primes:
        mv = linalg.matvec(mats[p].rows(), coords)
        j = next(i for i, c in enumerate(coords) if c)
        lam = mv[j] / coords[j]
        if any(x != lam * c for x, c in zip(mv, coords)):
            raise EigenError(f"rational vector is not an eigenvector of T({p}^2)")
        eig[p] = lam
    with mp.workprec(bits):
        emb = tuple(mpmath.mpf(c.numerator) / c.denominator for c in coeffs)
    return Eigenform(space, tuple(primes), coords, eig, emb, True, bits)


def _make_numeric(space, primes, v, mats, bits, guard) -> Eigenform:
    coeffs = _embed(space, v)
    # coefficients at the pivots are the coordinates themselves
    tol = mpmath.mpf(2) ** (-(bits // 2)) * max(abs(x) for x in v)
    idx = _normalizer(coeffs, space.prec, tol)
    scale = 1 / coeffs[idx]
    v = [x * scale for x in v]
    coeffs = [c * scale for c in coeffs]
    eig = {}
    vnorm = max(abs(x) for x in v)
    for p in primes:
        m = mats[p].rows()
        mv = [sum(mpmath.mpf(x.numerator) / x.denominator * y for x, y in zip(row, v)) for row in m]
        j = max(range(len(v)), key=lambda i: abs(v[i]))
        lam = mv[j] / v[j]
        resid = max(abs(a - lam * b) for a, b in zip(mv, v))
        if resid > mpmath.mpf(2) ** (-(bits // 2)) * (1 + abs(lam)) * vnorm:
            raise EigenError(f"vector fails to be an eigenvector of T({p}^2), residual {mpmath.nstr(resid, 5)}")
        eig[p] = lam
    return Eigenform(space, tuple(primes), tuple(v), eig, tuple(coeffs), False, bits)


def express_in_eigenbasis(f: Series, eigenforms: Sequence[Eigenform], bits: int = 128) -> list:
    """Coordinates c_i with f = sum c_i f_i."""
    if not eigenforms:
        if not f.is_zero():
            raise MembershipError("nonzero series in a zero-dimensional space")
        return []
    space = eigenforms[0].space
    target = space.coordinates(f)
    d = space.dim
    if len(eigenforms) != d:
        raise ValueError("eigenbasis does not span the space")
    if all(e.exact for e in eigenforms):
        mat = [[eigenforms[j].coords[i] for j in range(d)] for i in range(d)]
        aug = [row + [t] for row, t in zip(mat, target)]
        r, piv = linalg.rref(aug)
        if len(piv) != d or piv[-1] == d:
            raise MembershipError("eigenforms do not span the target")
        return [row[d] for row in r]
    with mp.workprec(bits + 32):
        a = mpmath.matrix(d, d)
        b = mpmath.matrix(d, 1)
        for i in range(d):
            for j in range(d):
                a[i, j] = mpmath.mpf(eigenforms[j].coords[i])
            b[i] = mpmath.mpf(target[i].numerator) / target[i].denominator
        x = mpmath.lu_solve(a, b)
        resid = mpmath.norm(a * x - b)
        if resid > mpmath.mpf(2) ** (-(bits // 2)) * (1 + mpmath.norm(b)):
            raise MembershipError(f"eigenbasis expansion residual {mpmath.nstr(resid, 5)}")
        return [x[i] for i in range(d)]


def eigen_ratio_deviation(ef: Eigenform, p: int, n_max: int = 100):
    """max |(T(p^2) f)(n) / a(n) - lambda_p| over 1 <= n <= n_max with a(n) != 0."""
    lam = ef.eigenvalues[p]
    if ef.exact:
        f = ef.series()
        tf = t_p2_coeffs(f, p, ef.space.k, n_max + 1)
        worst = Fraction(0)
        for n in range(1, n_max + 1):
            a = f.coeff(n)
            if a:
                worst = max(worst, abs(tf.coeff(n) / a - lam))
        return worst
    with mp.workprec(ef.bits + 64):
        coeffs = list(ef.coeffs)
        tf = t_p2_numeric(coeffs, p, ef.space.k, n_max)
        scale = max(abs(c) for c in coeffs[:n_max + 1])
        tol = mpmath.mpf(2) ** (-(ef.bits // 2)) * scale
        worst = mpmath.mpf(0)
        for n in range(1, n_max + 1):
            if abs(coeffs[n]) > tol:
                worst = max(worst, abs(tf[n] / coeffs[n] - lam))
        return worst
