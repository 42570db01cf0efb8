"""Completed L-functions of level-4 cusp forms of half-integral weight.

For a cusp form f of weight w = k + 1/2 with coefficients a(n) and W4-image
with coefficients b(n), splitting the Mellin integral at t = 1/2 and
integrating term by term gives the exponentially convergent expansion

    L*(f, s) = sum_n a(n) (pi n)^(-s) Gamma(s, pi n)
             + sum_n b(n) (pi n)^(s-w) Gamma(w-s, pi n),

valid for every complex s. The same split integral can also be evaluated by
direct quadrature of f(it) on [1/2, T], which is the independent cross-check
used throughout the tests.

Truncation bounds use an empirical coefficient-growth model:
|a(n)| <= C n^alpha with C twice the largest observed ratio. They are honest
heuristics, not certified interval bounds.
"""

from __future__ import annotations

import hashlib
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import mp

from .forms import DomainError, Weight
from .qseries import PrecisionError, Series

__all__ = [
    "DEFAULT_BITS", "FormValue", "LValue", "ScanPoint", "ConvergenceError",
    "gamma_complete", "gamma_upper", "eval_form", "lstar_eigen", "lstar_generic",
    "lstar_quadrature", "scan_real", "sign_changes", "functional_equation_residual",
    "default_target", "to_mp",
]

DEFAULT_BITS = 128
GUARD_BITS = 24


class ConvergenceError(RuntimeError):
    """An iterative kernel or quadrature failed to reach the requested accuracy."""


def default_target(bits: int):
    """Absolute truncation target 2^(-3 bits / 4); 2^-96 at the default 128 bits."""
    return mpmath.mpf(2) ** (-(3 * bits) // 4)


def to_mp(x):
    """Convert ints, Fractions, strings like '1+2i', and mp numbers to mpf/mpc."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        return _parse_complex(x)
    if isinstance(x, complex):
        return mpmath.mpc(x)
    return mpmath.mpmathify(x)


def _parse_complex(text: str):
    t = text.strip().replace(" ", "").replace("j", "i")
    if not t.endswith("i"):
        return mpmath.mpf(Fraction(t).numerator) / Fraction(t).denominator
    body = t[:-1]
    # split at the last sign that is not an exponent sign or leading sign
    cut = None
    for i in range(len(body) - 1, 0, -1):
        if body[i] in "+-" and body[i - 1] not in "eE":
            cut = i
            break
    if cut is None:
        re_part, im_part = "0", body
    else:
        re_part, im_part = body[:cut], body[cut:]
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    return mpmath.mpc(to_mp(Fraction(re_part)), to_mp(Fraction(im_part)))


def _weight_value(weight) -> Fraction:
    if isinstance(weight, Weight):
        return weight.value
    return Fraction(weight)


# -- special functions -------------------------------------------------------


def _is_pole(s) -> bool:
    s = mpmath.mpmathify(s)
    return mpmath.im(s) == 0 and mpmath.re(s) <= 0 and mpmath.isint(mpmath.re(s))


def gamma_complete(s, bits: int | None = None):
    """Euler's Gamma function; raises ValueError at the poles."""
    with mp.workprec((bits or mp.prec) + GUARD_BITS):
        s = to_mp(s)
        if _is_pole(s):
            raise ValueError(f"Gamma has a pole at s = {mpmath.nstr(s, 10)}")
        return mpmath.gamma(s)


def _gamma_upper_cf(s, x, max_iter: int):
    # modified Lentz evaluation of the Legendre continued fraction
    tiny = mpmath.mpf(2) ** (-4 * mp.prec)
    eps = mpmath.mpf(2) ** (-mp.prec)
    b = x + 1 - s
    c = 1 / tiny
    d = 1 / (b if abs(b) >= tiny else tiny)
    h = d
    for i in range(1, max_iter):
        an = -i * (i - s)
        b += 2
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1 / d
        delta = d * c
        h *= delta
        if abs(delta - 1) < eps:
            return mpmath.exp(s * mpmath.log(x) - x) * h
    raise ConvergenceError(f"continued fraction for Gamma({s}, {x}) did not converge")


def _gamma_lower_series(s, x, max_iter: int):
    eps = mpmath.mpf(2) ** (-mp.prec)
    term = 1 / s
    total = term
    for n in range(1, max_iter):
        term *= x / (s + n)
        total += term
        if abs(term) < eps * abs(total):
            return mpmath.exp(s * mpmath.log(x) - x) * total
    raise ConvergenceError(f"power series for gamma({s}, {x}) did not converge")


def gamma_upper(s, x, bits: int | None = None, max_iter: int = 100000):
    """Upper incomplete Gamma(s, x) for x > 0 and any complex s.

    Continued fraction when x >= max(1, 0.8 |s|) (or s is a pole of Gamma),
    otherwise Gamma(s) minus the lower-incomplete power series, with the
    working precision raised if that subtraction cancels.
    """
    bits = bits or mp.prec
    with mp.workprec(bits + GUARD_BITS):
        s = to_mp(s)
        x = to_mp(x)
        if not x > 0:
            raise ValueError("x must be positive")
        if x >= max(1, 0.8 * abs(s)) or _is_pole(s):
            return _gamma_upper_cf(s, x, max_iter)
        extra = 0
        while True:
            with mp.extraprec(extra):
                full = mpmath.gamma(s)
                lower = _gamma_lower_series(s, x, max_iter)
                out = full - lower
                if out == 0:
                    lost = mp.prec
                else:
                    lost = max(0, int(mpmath.log(max(abs(full), abs(lower)) / abs(out), 2)))
            if lost <= GUARD_BITS - 4 + extra or extra > 4 * bits:
                return +out
            extra = lost + GUARD_BITS


# -- coefficient sources ------------------------------------------------------


def _coefficients(f) -> tuple[list, str]:
    """Embedded coefficients a(0..prec-1) and a short hash for reports."""
    if isinstance(f, Series):
        d = f.denominator
        nums = f.numerators
        h = hashlib.sha1(repr((d, nums)).encode()).hexdigest()[:12]
        return [mpmath.mpf(a) / d if a else mpmath.mpf(0) for a in nums], h
    coeffs = getattr(f, "coeffs", f)
    vals = [to_mp(c) for c in coeffs]
    h = hashlib.sha1("|".join(mpmath.nstr(v, 30) for v in vals[:64]).encode()).hexdigest()[:12]
    return vals, h


def _partner(a: list, fw4) -> list:
    """Coefficients of f|W4; ``fw4`` may be the sign +1/-1 when f is a W4 eigenform.

    Call inside the working-precision context: negating an mpf rounds it.
    """
    if isinstance(fw4, int) and fw4 in (1, -1):
        return a if fw4 == 1 else [-x for x in a]
    return _coefficients(fw4)[0]


def _growth_constant(coeffs: Sequence, alpha: float) -> float:
    best = 0.0
    for n in range(1, len(coeffs)):
        a = coeffs[n]
        if a:
            best = max(best, float(abs(a)) / n ** alpha)
    return 2.0 * best


# -- evaluation on the imaginary axis ----------------------------------------


@dataclass(frozen=True)
class FormValue:
    """Value of f(it) with an explicit truncation bound."""

    t: object
    value: object
    tail_bound: object
    terms: int
    bits: int


def _choose_terms_eval(c: float, alpha: float, log_x: float, log_target: float, limit: int):
    # smallest N with C N^alpha x^N / (1 - rho) <= target, rho = (1 + 1/N)^alpha x
    if c == 0:
        return 1
    n = 1
    while n <= limit:
        log_rho = alpha * math.log1p(1 / n) + log_x
        if log_rho < 0:
            lb = math.log(c) + alpha * math.log(n) + n * log_x - math.log(-math.expm1(log_rho))
            if lb <= log_target:
                return n
        n += 1 if n < 4096 else n // 8
    return None


def eval_form(f, weight, t, bits: int = DEFAULT_BITS, target=None) -> FormValue:
    """f(it) = sum a(n) exp(-2 pi n t) with a tail bound.

    The growth model for the tail is |a(n)| <= C n^w, generous enough for
    Eisenstein-type growth n^(w-1) as well as cusp forms.
    """
    w = float(_weight_value(weight))
    with mp.workprec(bits + GUARD_BITS):
        t = to_mp(t)
        if not t > 0:
            raise ValueError("t must be positive")
        coeffs, _ = _coefficients(f)
        target = default_target(bits) if target is None else to_mp(target)
        c = _growth_constant(coeffs, w)
        log_x = float(-2 * mpmath.pi * t)
        n_terms = _choose_terms_eval(c, w, log_x, float(mpmath.log(target)), len(coeffs))
        if n_terms is None:
            need = _choose_terms_eval(c, w, log_x, float(mpmath.log(target)), 10 ** 9)
            raise PrecisionError(
                f"f(i*{mpmath.nstr(t, 8)}) to {mpmath.nstr(target, 3)} needs about {need} "
                f"coefficients, series has {len(coeffs)}")
        tail = mpmath.mpf(0)
        if c:
            rho = (1 + mpmath.mpf(1) / n_terms) ** w * mpmath.exp(log_x)
            tail = c * mpmath.mpf(n_terms) ** w * mpmath.exp(n_terms * log_x) / (1 - rho)
        x = mpmath.exp(-2 * mpmath.pi * t)
        acc = mpmath.mpf(0)
        for a in reversed(coeffs[:n_terms]):
            acc = acc * x + a
        return FormValue(t, acc, tail, n_terms, bits)


# -- completed L-function -----------------------------------------------------


@dataclass(frozen=True)
class LValue:
    """A value of L*(f, s) with its error accounting.

    ``tail_bound`` bounds the truncation of the series (or the quadrature
    range); ``method_error`` bounds rounding (gamma series) or is the
    quadrature error estimate. ``scale`` is the sum of absolute term sizes.
    """

    s: object
    value: object
    tail_bound: object
    method_error: object
    terms_used: int
    method: str
    form_id: str
    bits: int
    scale: object = field(default=0, repr=False)

    @property
    def error_budget(self):
        return self.tail_bound + self.method_error

    @property
    def real(self):
        return mpmath.re(self.value)

    def sign(self) -> int:
        """+1 / -1 when the real value clears its error budget, else 0."""
        v = mpmath.re(self.value)
        if abs(v) <= self.error_budget:
            return 0
        return 1 if v > 0 else -1


def _gamma_bound_factor(a: float, x: float) -> float:
    # Gamma(a, x) <= x^(a-1) e^(-x) * factor, valid for x > a - 1
    if a <= 1:
        return 1.0
    if x <= a - 1:
        return math.inf
    return x / (x - a + 1)


def _side_tail(c: float, alpha: float, a: float, x_unit: float, n: int, log_scale: float) -> float:
    # sum_{m >= n} c m^alpha (pi m)^(-a) Gamma(a, m x_unit) via Gamma(a, x) <= x^(a-1) e^(-x) K
    x = x_unit * n
    k = _gamma_bound_factor(a, x)
    if math.isinf(k):
        return math.inf
    rho = max(1.0, (1 + 1 / n) ** (alpha - 1)) * math.exp(-x_unit)
    if rho >= 1:
        return math.inf
    log_b = (math.log(c / math.pi) + math.log(k) + (alpha - 1) * math.log(n) - x
             + log_scale - math.log1p(-rho))
    return math.exp(log_b) if log_b > -700 else 0.0


def _lstar_tail(c: float, alpha: float, sigma: float, sigma2: float, n: int,
                split: float = 0.5) -> float:
    """Bound on sum_{m >= n} of the absolute series terms for split point ``split``."""
    if c == 0:
        return 0.0
    log2t = math.log(2 * split)
    return (_side_tail(c, alpha, sigma, 2 * math.pi * split, n, (sigma - 1) * log2t)
            + _side_tail(c, alpha, sigma2, math.pi / (2 * split), n, -(sigma2 - 1) * log2t))


def _choose_terms_lstar(c, alpha, sigma, sigma2, target: float, limit: int, split: float = 0.5):
    n = 1
    while n <= limit:
        if _lstar_tail(c, alpha, sigma, sigma2, n, split) <= target:
            return n
        n += 1
    return None


_KERNEL_CACHE: dict = {}
_KERNEL_LOCK = threading.Lock()


def _kernels(twice_weight: int, s_key, n_terms: int, bits: int, split=Fraction(1, 2)):
    """(pi n)^(-s) Gamma(s, 2 pi n t0) and (pi n)^(s-w) Gamma(w-s, pi n / (2 t0)) for n < n_terms.

    t0 is the split point (1/2 by default, the fixed point of z -> -1/(4z)).
    Tables are cached per (weight, s, bits, t0) and extended on demand; entries
    are deterministic, so a concurrent duplicate computation is harmless.
    """
    key = (twice_weight, s_key, bits, split)
    with _KERNEL_LOCK:
        have = _KERNEL_CACHE.get(key, ((None,), (None,)))
    if len(have[0]) >= n_terms:
        return have
    with mp.workprec(bits + GUARD_BITS):
        s = mpmath.mpc(s_key[0], s_key[1]) if s_key[1] != 0 else mpmath.mpf(s_key[0])
        w = mpmath.mpf(twice_weight) / 2
        t0 = to_mp(split)
        k1, k2 = list(have[0]), list(have[1])
        for n in range(len(k1), n_terms):
            x = mpmath.pi * n
            k1.append(x ** (-s) * gamma_upper(s, 2 * t0 * x, bits))
            k2.append(x ** (s - w) * gamma_upper(w - s, x / (2 * t0), bits))
    out = (tuple(k1), tuple(k2))
    with _KERNEL_LOCK:
        if len(_KERNEL_CACHE) > 20000:
            _KERNEL_CACHE.clear()
        cur = _KERNEL_CACHE.get(key)
        if cur is None or len(cur[0]) < len(out[0]):
            _KERNEL_CACHE[key] = out
    return out


def _s_key(s):
    s = to_mp(s)
    if isinstance(s, mpmath.mpc):
        return (s.real, s.imag)
    return (s, mpmath.mpf(0))


def _is_real(s) -> bool:
    return mpmath.im(s) == 0


def _describe(weight: Fraction, kind: str, h: str) -> str:
    w = f"{weight.numerator}/{weight.denominator}" if weight.denominator != 1 else str(weight.numerator)
    return f"weight={w};{kind};coeffs={h}"


def lstar_generic(f, fw4, weight, s, bits: int = DEFAULT_BITS, target=None,
                  _kind: str = "generic", _n_terms: int | None = None,
                  split=Fraction(1, 2)) -> LValue:
    """L*(f, s) from the coefficients of f and of f|W4, via incomplete Gamma values.

    ``fw4`` is anything ``f`` may be, or the integer sign +1/-1 when f|W4 = +-f.
    The Mellin integral is cut at t = ``split``; any positive rational works,
    and the value is independent of it exactly when f and f|W4 are related by
    the transformation law.
    """
    w = _weight_value(weight)
    split = Fraction(split)
    if split <= 0:
        raise ValueError("split point must be positive")
    tw = int(2 * w)
    if 2 * w != tw:
        raise ValueError("weight must be a multiple of 1/2")
    with mp.workprec(bits + GUARD_BITS):
        s = to_mp(s)
        a, h = _coefficients(f)
        b = _partner(a, fw4)
        if a[0] != 0 or b[0] != 0:
            raise DomainError("L* needs a cusp form: constant terms of f and f|W4 must vanish")
        prec = min(len(a), len(b))
        alpha = float(w) / 2 + 0.5
        c = max(_growth_constant(a[:prec], alpha), _growth_constant(b[:prec], alpha))
        sigma = float(mpmath.re(s))
        sigma2 = float(w) - sigma
        target = default_target(bits) if target is None else to_mp(target)
        t0 = float(split)
        n_terms = _n_terms or _choose_terms_lstar(c, alpha, sigma, sigma2, float(target), prec, t0)
        if n_terms is None:
            need = _choose_terms_lstar(c, alpha, sigma, sigma2, float(target), 10 ** 6, t0)
            raise PrecisionError(
                f"L*(f, {mpmath.nstr(s, 8)}) to {mpmath.nstr(target, 3)} needs about {need} "
                f"coefficients, series has {prec}")
        if n_terms > prec:
            raise PrecisionError(f"{n_terms} terms requested but series has {prec}")
        k1, k2 = _kernels(tw, _s_key(s), n_terms, bits, split)
        total = mpmath.mpf(0)
        scale = mpmath.mpf(0)
        for n in range(1, n_terms):
            t1 = a[n] * k1[n] if a[n] else 0
            t2 = b[n] * k2[n] if b[n] else 0
            total += t1 + t2
            scale += abs(t1) + abs(t2)
        if _is_real(s):
            total = mpmath.re(total)
        tail = mpmath.mpf(_lstar_tail(c, alpha, sigma, sigma2, n_terms, t0))
        rounding = scale * mpmath.mpf(2) ** (-(bits // 2))
        return LValue(s, total, tail, rounding, n_terms - 1, "gamma_series",
                      _describe(w, _kind, h), bits, scale)


def lstar_eigen(f, weight, sign: int, s, bits: int = DEFAULT_BITS, target=None,
                _n_terms: int | None = None) -> LValue:
    """L*(f, s) for f with f|W4 = sign * f."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return lstar_generic(f, sign, weight, s, bits, target, "sign=+" if sign == 1 else "sign=-", _n_terms)


FE_SPLIT = Fraction(3, 5)


def functional_equation_residual(f, fw4, weight, s, bits: int = DEFAULT_BITS, split=FE_SPLIT):
    """|L*(f, w - s) - L*(f|W4, s)|, both sides from the gamma series.

    The left side is cut at t = 1/2 and the right side at ``split``. With a
    common cut at 1/2 the two sums coincide term by term, so the residual
    would be zero whatever the coefficients; a different cut makes it test
    that f and f|W4 really are related by z -> -1/(4z).
    """
    w = to_mp(_weight_value(weight))
    with mp.workprec(bits + GUARD_BITS):
        s = to_mp(s)
        left = lstar_generic(f, fw4, weight, w - s, bits)
        if isinstance(fw4, int):
            right = fw4 * lstar_generic(f, fw4, weight, s, bits, split=split).value
        else:
            right = lstar_generic(fw4, f, weight, s, bits, split=split).value
        return abs(left.value - right)


# -- quadrature oracle ---------------------------------------------------------


def _eval_fast(coeffs, t, n_terms):
    x = mpmath.exp(-2 * mpmath.pi * t)
    acc = mpmath.mpf(0)
    for a in reversed(coeffs[:n_terms]):
        acc = acc * x + a
    return acc


def lstar_quadrature(f, fw4, weight, s, bits: int = DEFAULT_BITS, target=None,
                     t_max=None) -> LValue:
    """L*(f, s) by tanh-sinh quadrature of the split Mellin integral over [1/2, T].

    Independent of the incomplete-Gamma path: the integrand is built from
    f(it) and (f|W4)(it) directly.
    """
    w = _weight_value(weight)
    with mp.workprec(bits + GUARD_BITS):
        s = to_mp(s)
        wm = to_mp(w)
        a, h = _coefficients(f)
        b = _partner(a, fw4)
        if a[0] != 0 or b[0] != 0:
            raise DomainError("L* needs a cusp form: constant terms of f and f|W4 must vanish")
        target = default_target(bits) if target is None else to_mp(target)
        ev_a = eval_form(a, w, mpmath.mpf(1) / 2, bits, target / 64)
        ev_b = eval_form(b, w, mpmath.mpf(1) / 2, bits, target / 64)
        na, nb = ev_a.terms, ev_b.terms
        sigma = mpmath.re(s)
        ca = max(sigma, 0)          # exponent of 2t next to f
        cb = max(wm - sigma, 0)     # exponent of 2t next to f|W4

        def tail_beyond(T):
            fa = sum(abs(x) * mpmath.exp(-2 * mpmath.pi * n * T) for n, x in enumerate(a[:na]))
            fb = sum(abs(x) * mpmath.exp(-2 * mpmath.pi * n * T) for n, x in enumerate(b[:nb]))
            # omitted terms n >= N shrink by at least exp(-2 pi N (T - 1/2)) from t = 1/2
            fa += ev_a.tail_bound * mpmath.exp(-2 * mpmath.pi * na * (T - mpmath.mpf(1) / 2))
            fb += ev_b.tail_bound * mpmath.exp(-2 * mpmath.pi * nb * (T - mpmath.mpf(1) / 2))
            out = mpmath.mpf(0)
            for mass, c in ((fa, ca), (fb, cb)):
                rate = 2 * mpmath.pi - c / T
                if rate <= 0:
                    return mpmath.inf
                out += mass * (2 * T) ** c / T / rate
            return out

        if t_max is None:
            T = mpmath.mpf(2)
            while tail_beyond(T) > target / 4:
                T += 1
                if T > 512:
                    raise ConvergenceError("could not find a quadrature cut-off")
        else:
            T = to_mp(t_max)
        tail = tail_beyond(T)
        # truncation of f(it) itself, integrated against the kernel
        lg = mpmath.log(2 * T)
        tail += (ev_a.tail_bound * max(1, (2 * T) ** ca) + ev_b.tail_bound * max(1, (2 * T) ** cb)) * lg

        def integrand(t):
            u = 2 * t
            return (_eval_fast(b, t, nb) * u ** (wm - s) + _eval_fast(a, t, na) * u ** s) / t

        nodes = [mpmath.mpf(1) / 2]
        edge = mpmath.mpf(1)
        while edge < T:
            nodes.append(edge)
            edge *= 2
        nodes.append(T)
        value, err = mpmath.quad(integrand, nodes, error=True)
        if not mpmath.isfinite(value):
            raise ConvergenceError("quadrature returned a non-finite value")
        if _is_real(s):
            value = mpmath.re(value)
        return LValue(s, value, tail, err, max(na, nb), "quadrature",
                      _describe(w, "generic", h), bits, abs(value))


# -- scans -----------------------------------------------------------------------


@dataclass(frozen=True)
class ScanPoint:
    sigma: Fraction
    lvalue: LValue
    sign: int


def _grid(lo, hi, step) -> list[Fraction]:
    lo, hi, step = Fraction(lo), Fraction(hi), Fraction(step)
    if step <= 0:
        raise ValueError("step must be positive")
    if hi <= lo:
        return []
    n = int((hi - lo) / step)
    return [lo + j * step for j in range(n + 1)]


def scan_real(f, weight, sign: int, sigma_lo, sigma_hi, step, bits: int = DEFAULT_BITS) -> list[ScanPoint]:
    """L*(f, sigma) on the grid sigma_lo, sigma_lo + step, ..., <= sigma_hi."""
    out = []
    for sigma in _grid(sigma_lo, sigma_hi, step):
        lv = lstar_eigen(f, weight, sign, sigma, bits)
        out.append(ScanPoint(sigma, lv, lv.sign()))
    return out


def sign_changes(points: Sequence[ScanPoint]) -> list[tuple[Fraction, Fraction]]:
    """Intervals between consecutive decided signs that differ (undecided points skipped)."""
    out = []
    last = None
    for p in points:
        if p.sign == 0:
            continue
        if last is not None and last.sign != p.sign:
            out.append((last.sigma, p.sigma))
        last = p
    return out
