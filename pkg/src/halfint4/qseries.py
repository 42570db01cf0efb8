"""Truncated power series in q with exact rational coefficients.

A :class:`Series` stands for an exact q-expansion known modulo ``q**prec``.
Internally the coefficients are integer numerators over one positive common
denominator, kept in lowest terms, so every arithmetic step is integer
arithmetic and the convolution can be handed to the compiled kernel.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from . import _backend


class PrecisionError(ValueError):
    """Raised when a requested coefficient or result lies beyond known precision."""


#: valuation of a series whose known coefficients all vanish
ZERO_TO_PRECISION = math.inf


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot use {x!r} as an exact rational coefficient")


class Series:
    """Truncated q-expansion ``sum a(n) q**n + O(q**prec)``.

    >>> s = Series([1, 2, 0, 0, 2])
    >>> s.prec, s.coeff(4)
    (5, Fraction(2, 1))
    """

    __slots__ = ("_num", "_den", "prec")

    def __init__(self, coeffs: Iterable, prec: int | None = None):
        fr = [_as_fraction(c) for c in coeffs]
        if prec is None:
            prec = len(fr)
        if prec < 1:
            raise ValueError("prec must be positive")
        fr = fr[:prec] + [Fraction(0)] * (prec - len(fr))
        den = 1
        for c in fr:
            den = den * c.denominator // math.gcd(den, c.denominator)
        nums = [c.numerator * (den // c.denominator) for c in fr]
        self._set(nums, den)

    @classmethod
    def from_integers(cls, nums: Sequence[int], den: int = 1) -> "Series":
        """Build from integer numerators over a common denominator (no copy of intent)."""
        if den == 0:
            raise ZeroDivisionError("denominator is zero")
        if not nums:
            raise ValueError("prec must be positive")
        obj = cls.__new__(cls)
        if den < 0:
            nums = [-x for x in nums]
            den = -den
        obj._set(list(nums), den)
        return obj

    @classmethod
    def zero(cls, prec: int) -> "Series":
        return cls.from_integers([0] * prec)

    @classmethod
    def one(cls, prec: int) -> "Series":
        return cls.from_integers([1] + [0] * (prec - 1))

    def _set(self, nums: list[int], den: int) -> None:
        if den != 1:
            g = math.gcd(den, *nums)
            if g > 1:
                nums = [x // g for x in nums]
                den //= g
        if not any(nums):
            den = 1
        self._num = nums
        self._den = den
        self.prec = len(nums)

    # -- access ------------------------------------------------------------

    @property
    def numerators(self) -> tuple[int, ...]:
        return tuple(self._num)

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        d = self._den
        return tuple(Fraction(x, d) for x in self._num)

    def coeff(self, n: int) -> Fraction:
        if n < 0:
            raise IndexError("negative exponent")
        if n >= self.prec:
            raise PrecisionError(
                f"coefficient of q^{n} requested but series is only known to O(q^{self.prec})"
            )
        return Fraction(self._num[n], self._den)

    __getitem__ = coeff

    def valuation(self) -> int | float:
        for n, x in enumerate(self._num):
            if x:
                return n
        return ZERO_TO_PRECISION

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_integral(self) -> bool:
        return self._den == 1

    def truncate(self, prec: int) -> "Series":
        if prec > self.prec:
            raise PrecisionError(f"cannot raise precision from {self.prec} to {prec}")
        return Series.from_integers(self._num[:prec], self._den)

    # -- arithmetic --------------------------------------------------------

    def _common(self, other: "Series"):
        n = min(self.prec, other.prec)
        d1, d2 = self._den, other._den
        if d1 == d2:
            return n, self._num[:n], other._num[:n], d1
        g = math.gcd(d1, d2)
        m1, m2 = d2 // g, d1 // g
        return n, [x * m1 for x in self._num[:n]], [x * m2 for x in other._num[:n]], d1 * m1

    def __add__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        n, a, b, d = self._common(other)
        return Series.from_integers([x + y for x, y in zip(a, b)], d)

    def __sub__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        n, a, b, d = self._common(other)
        return Series.from_integers([x - y for x, y in zip(a, b)], d)

    def __neg__(self):
        return Series.from_integers([-x for x in self._num], self._den)

    def scale(self, c) -> "Series":
        c = _as_fraction(c)
        return Series.from_integers([x * c.numerator for x in self._num], self._den * c.denominator)

    def __mul__(self, other):
        if isinstance(other, Series):
            return mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, e: int):
        return pow_(self, e)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.prec == other.prec and self._den == other._den and self._num == other._num

    def __hash__(self):
        return hash((self.prec, self._den, tuple(self._num)))

    def agrees_with(self, other: "Series") -> bool:
        """Equality on the common range of known coefficients."""
        n = min(self.prec, other.prec)
        return self.truncate(n) == other.truncate(n)

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if self.prec > 8 else ""
        return f"Series([{shown}{more}], prec={self.prec})"


def add(a: Series, b: Series) -> Series:
    return a + b


def mul(a: Series, b: Series) -> Series:
    """Cauchy product truncated to ``min(a.prec, b.prec)``."""
    n = min(a.prec, b.prec)
    out = _backend.convolve(a._num, b._num, n)
    return Series.from_integers(out, a._den * b._den)


def pow_(a: Series, e: int) -> Series:
    if e < 0:
        raise ValueError("negative exponent")
    result = Series.one(a.prec)
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def v_operator(a: Series, m: int) -> Series:
    """Substitute ``q -> q**m``, keeping the precision of ``a``."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    out = [0] * a.prec
    for n in range(0, a.prec, m):
        out[n] = a._num[n // m]
    return Series.from_integers(out, a._den)


def coeff(a: Series, n: int) -> Fraction:
    return a.coeff(n)


def valuation(a: Series) -> int | float:
    return a.valuation()
