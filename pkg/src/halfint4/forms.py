"""Level-4 modular forms built from theta and F2.

Every form handled by the package is a polynomial in two generators,
``theta = sum q**(n*n)`` (weight 1/2) and ``F2 = sum_{n odd} sigma_1(n) q**n``
(weight 2). A :class:`RingElement` records such a polynomial exactly; its
q-expansion is produced on demand. The Fricke involution W4 is exact on this
ring: it fixes theta and sends F2 to ``theta**4/16 - F2``, using the
``(-2iz)**(-w)`` automorphy factor for every weight.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import _backend
from . import linalg
from .qseries import PrecisionError, Series, mul, pow_, v_operator

__all__ = [
    "Weight", "RingElement", "FormSpace", "InternalConsistencyError", "MembershipError",
    "DomainError", "THETA", "F2", "DELTA4", "D2",
    "theta", "quasi_eisenstein_p", "f2", "f2_closed_form", "delta4", "delta4_product", "d2",
    "w4", "monomials", "monomial_space", "cusp_space", "eigen_space",
    "plus_form", "minus_form", "cusp_dimension", "echelonize",
]


class InternalConsistencyError(RuntimeError):
    """A construction produced something the structure theory rules out."""


class MembershipError(ValueError):
    """A series does not lie in the space it was claimed to lie in."""


class DomainError(ValueError):
    """Parameters outside the range where an object is defined."""


@dataclass(frozen=True, order=True)
class Weight:
    """A weight stored as twice its value, so that k + 1/2 is exact."""

    twice_weight: int

    def __post_init__(self):
        if self.twice_weight < 0:
            raise ValueError("weight must be nonnegative")

    @classmethod
    def half_integral(cls, k: int) -> "Weight":
        return cls(2 * k + 1)

    @classmethod
    def integral(cls, k: int) -> "Weight":
        return cls(2 * k)

    @property
    def is_half_integral(self) -> bool:
        return self.twice_weight % 2 == 1

    @property
    def k(self) -> int:
        """Integer part: ``k`` for weight ``k + 1/2`` (or weight ``k``)."""
        return self.twice_weight // 2

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_weight, 2)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(self.twice_weight + other.twice_weight)

    def __str__(self):
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def cusp_dimension(k: int) -> int:
    """Dimension of the cusp space of weight k + 1/2 on Gamma_0(4)."""
    return max(0, k // 2 - 1)


# -- generator q-expansions ------------------------------------------------


@functools.lru_cache(maxsize=64)
def theta(prec: int) -> Series:
    if prec < 1:
        raise ValueError("prec must be positive")
    out = [0] * prec
    out[0] = 1
    n = 1
    while n * n < prec:
        out[n * n] = 2
        n += 1
    return Series.from_integers(out)


@functools.lru_cache(maxsize=64)
def quasi_eisenstein_p(prec: int) -> Series:
    """P = 1 - 24 sum sigma_1(n) q**n."""
    if prec < 1:
        raise ValueError("prec must be positive")
    s = _backend.sigma1_table(prec)
    out = [-24 * x for x in s]
    out[0] = 1
    return Series.from_integers(out)


@functools.lru_cache(maxsize=64)
def f2(prec: int) -> Series:
    """F2 = (-P(z) + 3 P(2z) - 2 P(4z)) / 24, computed from that combination."""
    p = quasi_eisenstein_p(prec)
    combo = -p + v_operator(p, 2).scale(3) - v_operator(p, 4).scale(2)
    return combo.scale(Fraction(1, 24))


def f2_closed_form(prec: int) -> Series:
    """sigma_1(n) on odd n, zero elsewhere."""
    s = _backend.sigma1_table(prec)
    return Series.from_integers([x if n % 2 else 0 for n, x in enumerate(s)])


@functools.lru_cache(maxsize=64)
def delta4(prec: int) -> Series:
    """Delta4 = F2 (theta**4 - 16 F2)."""
    g = f2(prec)
    return mul(g, _theta_power(4, prec) - g.scale(16))


@functools.lru_cache(maxsize=16)
def delta4_product(prec: int) -> Series:
    """q * prod_{n = 0, +-1 mod 4} (1 - q**n)**8, truncated to O(q**prec)."""
    if prec < 1:
        raise ValueError("prec must be positive")
    # running product of (1 - q^n), kept to O(q^(prec-1)) since it gets shifted by q
    m = max(prec - 1, 1)
    c = [0] * m
    c[0] = 1
    for n in range(1, m):
        if n % 4 in (0, 1, 3):
            for j in range(m - 1, n - 1, -1):
                c[j] -= c[j - n]
    eighth = pow_(Series.from_integers(c), 8)
    return Series.from_integers([0] + list(eighth.numerators)[: prec - 1])


@functools.lru_cache(maxsize=64)
def d2(prec: int) -> Series:
    """D2 = theta**4 - 32 F2."""
    return _theta_power(4, prec) - f2(prec).scale(32)


@functools.lru_cache(maxsize=256)
def _theta_power(a: int, prec: int) -> Series:
    if a == 0:
        return Series.one(prec)
    if a == 1:
        return theta(prec)
    half = _theta_power(a // 2, prec)
    sq = mul(half, half)
    return mul(sq, theta(prec)) if a % 2 else sq


@functools.lru_cache(maxsize=256)
def _f2_power(b: int, prec: int) -> Series:
    if b == 0:
        return Series.one(prec)
    if b == 1:
        return f2(prec)
    half = _f2_power(b // 2, prec)
    sq = mul(half, half)
    return mul(sq, f2(prec)) if b % 2 else sq


@functools.lru_cache(maxsize=1024)
def monomial_series(a: int, b: int, prec: int) -> Series:
    """q-expansion of theta**a * F2**b."""
    if b == 0:
        return _theta_power(a, prec)
    if a == 0:
        return _f2_power(b, prec)
    return mul(_theta_power(a, prec), _f2_power(b, prec))


# -- the graded ring -------------------------------------------------------


def monomials(twice_weight: int) -> list[tuple[int, int]]:
    """Exponent pairs (a, b) with a + 4b = twice_weight, ordered by b."""
    return [(twice_weight - 4 * b, b) for b in range(twice_weight // 4 + 1)]


class RingElement:
    """Homogeneous polynomial in theta and F2 with rational coefficients.

    ``terms`` maps ``(a, b)`` to the coefficient of ``theta**a * F2**b``.
    """

    __slots__ = ("weight", "terms")

    def __init__(self, twice_weight: int, terms: Mapping[tuple[int, int], object] = ()):
        clean: dict[tuple[int, int], Fraction] = {}
        for (a, b), c in dict(terms).items():
            if a < 0 or b < 0 or a + 4 * b != twice_weight:
                raise ValueError(f"monomial theta^{a} F2^{b} is not of weight {twice_weight}/2")
            c = Fraction(c)
            if c:
                clean[(a, b)] = clean.get((a, b), Fraction(0)) + c
        self.weight = Weight(twice_weight)
        self.terms = {m: c for m, c in sorted(clean.items(), key=lambda t: t[0][1]) if c}

    @classmethod
    def monomial(cls, a: int, b: int, c=1) -> "RingElement":
        return cls(a + 4 * b, {(a, b): c})

    @classmethod
    def from_coordinates(cls, twice_weight: int, coords: Sequence) -> "RingElement":
        mons = monomials(twice_weight)
        if len(coords) != len(mons):
            raise ValueError("coordinate vector has the wrong length")
        return cls(twice_weight, dict(zip(mons, coords)))

    @property
    def twice_weight(self) -> int:
        return self.weight.twice_weight

    def coordinates(self) -> list[Fraction]:
        return [self.terms.get(m, Fraction(0)) for m in monomials(self.twice_weight)]

    def is_zero(self) -> bool:
        return not self.terms

    def series(self, prec: int) -> Series:
        out = Series.zero(prec)
        for (a, b), c in self.terms.items():
            out = out + monomial_series(a, b, prec).scale(c)
        return out

    def _check(self, other: "RingElement"):
        if self.twice_weight != other.twice_weight:
            raise ValueError(f"weights differ: {self.weight} vs {other.weight}")

    def __add__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, Fraction(0)) + c
        return RingElement(self.twice_weight, t)

    def __neg__(self):
        return RingElement(self.twice_weight, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RingElement):
            t: dict[tuple[int, int], Fraction] = {}
            for (a1, b1), c1 in self.terms.items():
                for (a2, b2), c2 in other.terms.items():
                    m = (a1 + a2, b1 + b2)
                    t[m] = t.get(m, Fraction(0)) + c1 * c2
            return RingElement(self.twice_weight + other.twice_weight, t)
        try:
            c = Fraction(other)
        except TypeError:
            return NotImplemented
        return RingElement(self.twice_weight, {m: c * v for m, v in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        out = RingElement.monomial(0, 0)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.twice_weight == other.twice_weight and self.terms == other.terms

    def __hash__(self):
        return hash((self.twice_weight, tuple(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"0 (weight {Weight(self.twice_weight)})"
        out = ""
        for (a, b), c in self.terms.items():
            mon = "*".join(x for x in (
                f"theta^{a}" if a > 1 else ("theta" if a == 1 else ""),
                f"F2^{b}" if b > 1 else ("F2" if b == 1 else "")) if x) or "1"
            mag = abs(c)
            term = mon if mag == 1 else (f"{mag}" if mon == "1" else f"{mag}*{mon}")
            if not out:
                out = f"-{term}" if c < 0 else term
            else:
                out += f" - {term}" if c < 0 else f" + {term}"
        return out


THETA = RingElement.monomial(1, 0)
F2 = RingElement.monomial(0, 1)
DELTA4 = THETA ** 4 * F2 - 16 * F2 ** 2
D2 = THETA ** 4 - 32 * F2


@functools.lru_cache(maxsize=512)
def _w4_monomial(a: int, b: int) -> tuple[tuple[tuple[int, int], Fraction], ...]:
    # theta^a (theta^4/16 - F2)^b expanded binomially
    out = []
    for j in range(b + 1):
        c = Fraction(math.comb(b, j) * (-1) ** j, 16 ** (b - j))
        out.append(((a + 4 * (b - j), j), c))
    return tuple(out)


def w4(e: RingElement) -> RingElement:
    """Exact image under the Fricke involution."""
    t: dict[tuple[int, int], Fraction] = {}
    for (a, b), c in e.terms.items():
        for m, d in _w4_monomial(a, b):
            t[m] = t.get(m, Fraction(0)) + c * d
    return RingElement(e.twice_weight, t)


def w4_matrix(twice_weight: int) -> linalg.Matrix:
    """Matrix of W4 on monomial coordinates (column j = image of monomial j)."""
    mons = monomials(twice_weight)
    cols = [w4(RingElement.monomial(a, b)).coordinates() for a, b in mons]
    return [[cols[j][i] for j in range(len(mons))] for i in range(len(mons))]


# -- spaces ------------------------------------------------------------------


def echelonize(elements: Iterable[RingElement], prec: int) -> tuple[list[RingElement], list[Series]]:
    """Reduced echelon basis ordered by q-valuation, with unit pivots.

    Raises :class:`PrecisionError` if the elements cannot be separated by
    their first ``prec`` coefficients.
    """
    rows = [(e, e.series(prec)) for e in elements]
    if rows and prec < len(rows) + 1:
        raise PrecisionError(f"prec {prec} too small to echelonize {len(rows)} forms; need >= {len(rows) + 1}")
    done: list[tuple[int, RingElement, Series]] = []
    while rows:
        i = min(range(len(rows)), key=lambda j: rows[j][1].valuation())
        e, s = rows.pop(i)
        v = s.valuation()
        if v == math.inf:
            raise PrecisionError(
                f"forms are not separated to O(q^{prec}); increase prec")
        inv = 1 / s.coeff(v)
        e, s = e * inv, s.scale(inv)
        rows = [(e2 - e * s2.coeff(v), s2 - s.scale(s2.coeff(v))) for e2, s2 in rows]
        done = [(v2, e2 - e * s2.coeff(v), s2 - s.scale(s2.coeff(v))) for v2, e2, s2 in done]
        done.append((v, e, s))
    done.sort(key=lambda t: t[0])
    return [e for _, e, _ in done], [s for _, _, s in done]


@dataclass(frozen=True)
class FormSpace:
    """Echelonized basis of a space of forms of one weight.

    ``kind`` is one of ``"full"``, ``"cusp"``, ``"plus"``, ``"minus"``.
    Basis series are in reduced echelon form: the pivot of ``basis[i]`` is
    ``pivots[i]`` with coefficient 1, and every other basis series vanishes there.
    """

    weight: Weight
    kind: str
    basis: tuple[RingElement, ...]
    series: tuple[Series, ...]
    prec: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(int(s.valuation()) for s in self.series)

    @property
    def k(self) -> int:
        return self.weight.k

    @property
    def sign(self) -> int | None:
        return {"plus": 1, "minus": -1}.get(self.kind)

    def coordinates(self, f: Series) -> list[Fraction]:
        """Coordinates of ``f`` in the basis; raises MembershipError on a nonzero residual."""
        coords = [f.coeff(v) for v in self.pivots]
        n = min(f.prec, self.prec)
        resid = f.truncate(n)
        for c, s in zip(coords, self.series):
            if c:
                resid = resid - s.truncate(n).scale(c)
        if not resid.is_zero():
            raise MembershipError(
                f"series not in the {self.kind} space of weight {self.weight} "
                f"(residual at q^{int(resid.valuation())})")
        return coords

    def contains(self, f: Series) -> bool:
        try:
            self.coordinates(f)
        except MembershipError:
            return False
        return True

    def element(self, coords: Sequence) -> RingElement:
        out = RingElement(self.weight.twice_weight)
        for c, e in zip(coords, self.basis):
            out = out + e * c
        return out

    def with_prec(self, prec: int) -> "FormSpace":
        """Same space, re-expanded to another precision."""
        basis, series = echelonize(self.basis, prec)
        return FormSpace(self.weight, self.kind, tuple(basis), tuple(series), prec)


def _default_prec(twice_weight: int) -> int:
    return twice_weight // 4 + 12


def monomial_space(weight: Weight | int, prec: int | None = None) -> FormSpace:
    """Span of all theta**a F2**b of the given weight (twice_weight if an int)."""
    if isinstance(weight, int):
        weight = Weight(weight)
    if weight.twice_weight < 1:
        raise DomainError("weight must be positive")
    prec = prec or _default_prec(weight.twice_weight)
    gens = [RingElement.monomial(a, b) for a, b in monomials(weight.twice_weight)]
    basis, series = echelonize(gens, prec)
    return FormSpace(weight, "full", tuple(basis), tuple(series), prec)


def _cusp_conditions(twice_weight: int) -> linalg.Matrix:
    # constant term at infinity of f and of f|W4, as functionals on monomial coordinates
    mons = monomials(twice_weight)
    at_infinity = [Fraction(int(b == 0)) for _, b in mons]
    at_zero = []
    for a, b in mons:
        img = w4(RingElement.monomial(a, b))
        at_zero.append(sum((c for (_, bb), c in img.terms.items() if bb == 0), Fraction(0)))
    return [at_infinity, at_zero]


def _space_from_vectors(weight: Weight, kind: str, vectors, prec: int) -> FormSpace:
    elems = [RingElement.from_coordinates(weight.twice_weight, v) for v in vectors]
    basis, series = echelonize(elems, prec) if elems else ([], [])
    return FormSpace(weight, kind, tuple(basis), tuple(series), prec)


def cusp_space(k: int, prec: int | None = None) -> FormSpace:
    """Cusp forms of weight k + 1/2: monomials killed by both constant-term functionals."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    weight = Weight.half_integral(k)
    prec = prec or _default_prec(weight.twice_weight)
    cond = _cusp_conditions(weight.twice_weight)
    vecs = linalg.nullspace(cond, len(monomials(weight.twice_weight)))
    space = _space_from_vectors(weight, "cusp", vecs, prec)
    if space.dim != cusp_dimension(k):
        raise InternalConsistencyError(
            f"cusp space of weight {weight} has dimension {space.dim}, expected {cusp_dimension(k)}")
    return space


def eigen_space(k: int, sign: int, prec: int | None = None) -> FormSpace:
    """The +1 or -1 eigenspace of W4 inside the cusp space of weight k + 1/2."""
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if k < 0:
        raise DomainError("k must be nonnegative")
    weight = Weight.half_integral(k)
    prec = prec or _default_prec(weight.twice_weight)
    tw = weight.twice_weight
    m = len(monomials(tw))
    w = w4_matrix(tw)
    shifted = [[w[i][j] - (sign if i == j else 0) for j in range(m)] for i in range(m)]
    vecs = linalg.nullspace(_cusp_conditions(tw) + shifted, m)
    return _space_from_vectors(weight, "plus" if sign == 1 else "minus", vecs, prec)


def plus_form(k: int, prec: int) -> tuple[RingElement, Series]:
    """Delta4 * theta**(2k-7), a W4-invariant cusp form of weight k + 1/2."""
    if k < 4:
        raise DomainError("k >= 4 required for Delta4*theta^(2k-7)")
    e = DELTA4 * THETA ** (2 * k - 7)
    return e, e.series(prec)


def minus_form(k: int, prec: int) -> tuple[RingElement, Series]:
    """Delta4 * D2 * theta**(2k-11), a W4-anti-invariant cusp form of weight k + 1/2."""
    if k < 6:
        raise DomainError("k >= 6 required for Delta4*D2*theta^(2k-11)")
    e = DELTA4 * D2 * THETA ** (2 * k - 11)
    return e, e.series(prec)
