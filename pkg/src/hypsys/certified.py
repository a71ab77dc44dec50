"""Certified real numbers.

A :class:`CertifiedReal` is a lazily evaluated real number that can produce a
rigorous enclosing interval at any requested binary precision.  Intervals are
computed with mpmath's outward-rounded interval context, so their endpoints
are dyadic rationals and every enclosure is guaranteed to contain the true
value.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from numbers import Rational

from mpmath import iv, libmp, mpf

from .errors import PrecisionExhausted

__all__ = [
    "CertifiedReal",
    "as_certified",
    "cr_min",
    "cr_max",
    "interval_to_fractions",
    "START_PREC",
    "MAX_PREC",
]

START_PREC = 64
MAX_PREC = 1 << 14

# mpmath keeps the interval precision as global context state
_LOCK = threading.RLock()


def _mpq(value: Fraction):
    return iv._mpq((value.numerator, value.denominator))


def _raw_to_fraction(raw) -> Fraction:
    p, q = libmp.to_rational(raw)
    return Fraction(int(p), int(q))


def interval_to_fractions(x) -> tuple[Fraction, Fraction]:
    lo, hi = x._mpi_
    return _raw_to_fraction(lo), _raw_to_fraction(hi)


def _width(x) -> Fraction:
    lo, hi = interval_to_fractions(x)
    return hi - lo


def _intersect(a, b):
    alo, ahi = a._mpi_
    blo, bhi = b._mpi_
    lo = alo if libmp.mpf_ge(alo, blo) else blo
    hi = ahi if libmp.mpf_le(ahi, bhi) else bhi
    if not libmp.mpf_le(lo, hi):
        # both are valid enclosures of the same number, so they must overlap
        raise ArithmeticError("disjoint enclosures of one value")
    return iv.make_mpf((lo, hi))


def _iv_min(xs):
    lo = min((x._mpi_[0] for x in xs), key=_raw_to_fraction)
    hi = min((x._mpi_[1] for x in xs), key=_raw_to_fraction)
    return iv.make_mpf((lo, hi))


def _iv_max(xs):
    lo = max((x._mpi_[0] for x in xs), key=_raw_to_fraction)
    hi = max((x._mpi_[1] for x in xs), key=_raw_to_fraction)
    return iv.make_mpf((lo, hi))


def _clip_nonneg(x):
    lo, hi = x._mpi_
    if libmp.mpf_lt(hi, libmp.fzero):
        raise ValueError("argument certified negative")
    if libmp.mpf_lt(lo, libmp.fzero):
        lo = libmp.fzero
    return iv.make_mpf((lo, hi))


def _point(raw):
    return iv.make_mpf((raw, raw))


def _monotone(f, x, increasing=True):
    """Enclose ``f(x)`` for monotone ``f`` by evaluating at the endpoints."""
    lo, hi = x._mpi_
    flo = f(_point(lo))
    fhi = f(_point(hi))
    if increasing:
        return iv.make_mpf((flo._mpi_[0], fhi._mpi_[1]))
    return iv.make_mpf((fhi._mpi_[0], flo._mpi_[1]))


def _clamp(x, lo=None, hi=None):
    a, b = x._mpi_
    if lo is not None:
        lo = libmp.from_int(lo)
        a = lo if libmp.mpf_lt(a, lo) else a
        b = lo if libmp.mpf_lt(b, lo) else b
    if hi is not None:
        hi = libmp.from_int(hi)
        a = hi if libmp.mpf_gt(a, hi) else a
        b = hi if libmp.mpf_gt(b, hi) else b
    return iv.make_mpf((a, b))


def _iv_acosh(x):
    x = _clamp(x, lo=1)

    def f(t):
        return iv.log(t + iv.sqrt(_clip_nonneg(t * t - 1)))

    return _monotone(f, x)


def _iv_asinh(x):
    def f(t):
        if t >= 0:
            return iv.log(t + iv.sqrt(t * t + 1))
        return -iv.log(-t + iv.sqrt(t * t + 1))

    return _monotone(f, x)


def _iv_acos(x):
    x = _clamp(x, -1, 1)

    def f(t):
        return iv.atan2(iv.sqrt(_clip_nonneg(1 - t * t)), t)

    return _monotone(f, x, increasing=False)


class CertifiedReal:
    """A real number known through a family of nested rigorous enclosures.

    ``fn(prec)`` must return an ``iv`` interval containing the value, computed
    with the interval context set to ``prec`` bits; widths are expected to
    shrink as ``prec`` grows.
    """

    __slots__ = ("_fn", "_cache", "_floor", "_prec")

    def __init__(self, fn, *, floor=None, prec: int = START_PREC):
        self._fn = fn
        self._cache: dict[int, object] = {}
        self._floor = floor
        self._prec = prec

    # construction -------------------------------------------------------

    @classmethod
    def exact(cls, value) -> "CertifiedReal":
        q = _to_fraction(value)
        return cls(lambda prec: _mpq(q))

    @classmethod
    def pi(cls) -> "CertifiedReal":
        return cls(lambda prec: +iv.pi)

    @classmethod
    def from_interval(cls, lo, hi) -> "CertifiedReal":
        """A fixed (non-refinable) enclosure ``[lo, hi]``."""
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("empty interval")

        def fn(prec):
            a = _mpq(lo)._mpi_[0]
            b = _mpq(hi)._mpi_[1]
            return iv.make_mpf((a, b))

        return cls(fn)

    # evaluation ---------------------------------------------------------

    def at(self, prec: int):
        """Enclosing interval computed at ``prec`` bits."""
        try:
            return self._cache[prec]
        except KeyError:
            pass
        with _LOCK:
            saved = iv.prec
            iv.prec = prec
            try:
                value = self._fn(prec)
            finally:
                iv.prec = saved
        if self._floor is not None:
            value = _intersect(value, self._floor)
        if len(self._cache) > 8:
            self._cache.clear()
        self._cache[prec] = value
        return value

    def interval(self, prec: int | None = None) -> tuple[Fraction, Fraction]:
        return interval_to_fractions(self.at(prec or self._prec))

    def enclose(self, width) -> object:
        """Return an enclosure narrower than ``width`` (raises when impossible)."""
        width = _to_fraction(width)
        prec = self._prec
        while prec <= MAX_PREC:
            x = self.at(prec)
            if _width(x) < width:
                return x
            prec *= 2
        raise PrecisionExhausted(f"could not reach width {float(width):.3g}")

    def enclose_fractions(self, width) -> tuple[Fraction, Fraction]:
        return interval_to_fractions(self.enclose(width))

    def refine(self, factor=2) -> "CertifiedReal":
        """New value whose current enclosure is ``factor`` times narrower.

        The result's enclosures are always intersected with this value's
        current enclosure, so successive refinements are nested.
        """
        current = self.at(self._prec)
        w = _width(current)
        target = w / Fraction(factor) if w else Fraction(0)
        prec = self._prec
        if w:
            while prec <= MAX_PREC and _width(self.at(prec)) >= target:
                prec *= 2
        if prec > MAX_PREC:
            raise PrecisionExhausted("refinement did not shrink the enclosure")
        return CertifiedReal(self._fn, floor=current, prec=prec)

    def width(self) -> Fraction:
        return _width(self.at(self._prec))

    def mid(self) -> Fraction:
        lo, hi = self.interval()
        return (lo + hi) / 2

    def __float__(self) -> float:
        lo, hi = self.enclose_fractions(Fraction(1, 1 << 60))
        return float((lo + hi) / 2)

    def sign(self, max_prec: int = MAX_PREC) -> int:
        """Certified sign.  Zero is returned only for an exact point ``[0, 0]``."""
        prec = self._prec
        while prec <= max_prec:
            lo, hi = self.interval(prec)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if lo == hi == 0:
                return 0
            prec *= 2
        raise PrecisionExhausted("sign could not be certified")

    def contains(self, value, prec: int | None = None) -> bool:
        lo, hi = self.interval(prec)
        return lo <= _to_fraction(value) <= hi

    def within(self, other, tol, prec: int | None = None) -> bool:
        """Certify ``|self - other| < tol``; ``False`` if not provable."""
        tol = _to_fraction(tol)
        diff = self - as_certified(other)
        try:
            lo, hi = diff.enclose_fractions(tol / 4)
        except PrecisionExhausted:
            return False
        return -tol < lo and hi < tol

    # arithmetic ---------------------------------------------------------

    def _binary(self, other, op):
        other = as_certified(other)
        return CertifiedReal(lambda prec: op(self.at(prec), other.at(prec)))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __radd__(self, other):
        return as_certified(other) + self

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return as_certified(other) - self

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return as_certified(other) * self

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return as_certified(other) / self

    def __neg__(self):
        return CertifiedReal(lambda prec: -self.at(prec))

    def __abs__(self):
        return CertifiedReal(lambda prec: abs(self.at(prec)))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        return CertifiedReal(lambda prec: self.at(prec) ** n)

    def __lt__(self, other):
        return (as_certified(other) - self).sign() > 0

    def __gt__(self, other):
        return (self - as_certified(other)).sign() > 0

    def __le__(self, other):
        return self < other

    def __ge__(self, other):
        return self > other

    def sqrt(self):
        return CertifiedReal(lambda prec: iv.sqrt(_clip_nonneg(self.at(prec))))

    def log(self):
        return CertifiedReal(lambda prec: iv.log(self.at(prec)))

    def exp(self):
        return CertifiedReal(lambda prec: iv.exp(self.at(prec)))

    def cos(self):
        return CertifiedReal(lambda prec: iv.cos(self.at(prec)))

    def sin(self):
        return CertifiedReal(lambda prec: iv.sin(self.at(prec)))

    def cosh(self):
        return CertifiedReal(lambda prec: (iv.exp(self.at(prec)) + iv.exp(-self.at(prec))) / 2)

    def sinh(self):
        return CertifiedReal(lambda prec: (iv.exp(self.at(prec)) - iv.exp(-self.at(prec))) / 2)

    def acosh(self):
        """Inverse hyperbolic cosine; the value must be >= 1."""
        return CertifiedReal(lambda prec: _iv_acosh(self.at(prec)))

    def asinh(self):
        return CertifiedReal(lambda prec: _iv_asinh(self.at(prec)))

    def acos(self):
        """Inverse cosine; the value must lie in [-1, 1]."""
        return CertifiedReal(lambda prec: _iv_acos(self.at(prec)))

    def decimal(self, digits: int = 30) -> tuple[str, str]:
        """Decimal strings bounding the value, accurate to ``digits`` places."""
        x = self.enclose(Fraction(1, 10 ** (digits + 2)))
        lo, hi = interval_to_fractions(x)
        return _decimal_floor(lo, digits), _decimal_ceil(hi, digits)

    def __repr__(self):
        lo, hi = self.decimal(15)
        return f"CertifiedReal([{lo}, {hi}])"


def _decimal_floor(q: Fraction, digits: int) -> str:
    scaled = math.floor(q * 10**digits)
    return _fmt_scaled(scaled, digits)


def _decimal_ceil(q: Fraction, digits: int) -> str:
    scaled = math.ceil(q * 10**digits)
    return _fmt_scaled(scaled, digits)


def _fmt_scaled(n: int, digits: int) -> str:
    sign = "-" if n < 0 else ""
    s = str(abs(n)).rjust(digits + 1, "0")
    if digits == 0:
        return sign + s
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, mpf):
        p, q = libmp.to_rational(value._mpf_)
        return Fraction(int(p), int(q))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def as_certified(value) -> CertifiedReal:
    if isinstance(value, CertifiedReal):
        return value
    to_cr = getattr(value, "embed", None)
    if to_cr is not None:
        return to_cr()
    return CertifiedReal.exact(value)


def cr_min(values) -> CertifiedReal:
    values = [as_certified(v) for v in values]
    return CertifiedReal(lambda prec: _iv_min([v.at(prec) for v in values]))


def cr_max(values) -> CertifiedReal:
    values = [as_certified(v) for v in values]
    return CertifiedReal(lambda prec: _iv_max([v.at(prec) for v in values]))
