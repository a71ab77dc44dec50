"""Totally real number fields and exact arithmetic in them.

A field is presented as ``Q[x]/(f)`` for a monic irreducible ``f`` whose roots
are all real.  Each real root is one embedding; the *identity embedding* is the
one through which the field is viewed as a subfield of R.  Elements are stored
in the power basis of the generator, so arithmetic is exact rational
arithmetic, while signs at an embedding are certified with interval
arithmetic (the zero test itself is symbolic).
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import cached_property
from math import gcd as igcd

import sympy
from mpmath import iv

from . import poly
from .certified import CertifiedReal, _mpq, START_PREC, MAX_PREC
from .errors import (
    FieldMismatch,
    InputError,
    NotIrreducible,
    NotTotallyReal,
    PrecisionExhausted,
    PrimitiveElementSearchExceeded,
)

__all__ = [
    "NumberField",
    "FieldElement",
    "FieldHom",
    "EmbeddingContext",
    "QQ",
    "make_field",
    "cos_field",
    "two_cos",
    "compositum",
    "min_poly_of",
    "is_algebraic_integer",
    "sign_at",
    "parse_rational",
]


def parse_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError as exc:
            raise InputError(f"not a rational number: {value!r}") from exc
    raise InputError(f"not a rational number: {value!r}")


class NumberField:
    """``Q[x]/(min_poly)`` with its real embeddings isolated."""

    def __init__(self, min_poly, roots, identity_embedding: int):
        self.min_poly = tuple(min_poly)
        self.degree = len(self.min_poly) - 1
        self._roots = roots
        self.identity_embedding = identity_embedding
        self._lock = threading.Lock()
        # x**j reduced into the power basis, for j = n .. 2n - 2
        tail = [-c for c in reversed(self.min_poly[1:])]  # x**n = sum tail[i] x**i
        self._reduce = self._build_reduce(tail, self.degree)

    @staticmethod
    def _build_reduce(tail, n):
        rows = []
        cur = list(tail)
        for _ in range(n - 1):
            rows.append(cur)
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            cur = [a + top * b for a, b in zip(cur, tail)]
        return rows

    # identity -----------------------------------------------------------

    def _key(self):
        if self.degree == 1:
            return (1,)
        return (self.min_poly, self.identity_embedding)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.degree == 1:
            return "NumberField(QQ)"
        return f"NumberField({_poly_str(self.min_poly)}, embedding={self.identity_embedding})"

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def embeddings(self) -> range:
        return range(self.degree)

    # elements -----------------------------------------------------------

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            coeffs = [parse_rational(c) for c in value]
            if len(coeffs) > self.degree:
                coeffs = poly.rem(list(reversed(coeffs)), list(self.min_poly))
                coeffs = list(reversed(coeffs))
            coeffs += [Fraction(0)] * (self.degree - len(coeffs))
            return FieldElement(self, coeffs)
        q = parse_rational(value) if not isinstance(value, Fraction) else value
        return FieldElement(self, [q] + [Fraction(0)] * (self.degree - 1))

    @cached_property
    def zero(self) -> "FieldElement":
        return self(0)

    @cached_property
    def one(self) -> "FieldElement":
        return self(1)

    @cached_property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self(-self.min_poly[1])
        return FieldElement(self, [Fraction(0), Fraction(1)] + [Fraction(0)] * (self.degree - 2))

    def from_poly(self, f) -> "FieldElement":
        """Element ``f(gen)`` for a rational polynomial ``f`` (leading first)."""
        return self(list(reversed(poly.strip(poly.fractions(f)))) or [0])

    # embeddings ---------------------------------------------------------

    def root_interval(self, e: int, width: Fraction) -> tuple[Fraction, Fraction]:
        return self._roots[e].refine_to(width)

    def root_value(self, e: int | None = None) -> CertifiedReal:
        e = self.identity_embedding if e is None else e
        return self._roots[e].certified()

    def context(self, e: int | None = None) -> "EmbeddingContext":
        return EmbeddingContext(self, self.identity_embedding if e is None else e)


class FieldElement:
    """Element of a :class:`NumberField` in the power basis of its generator."""

    __slots__ = ("field", "coeffs", "__weakref__")

    def __init__(self, field: NumberField, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)

    # helpers ------------------------------------------------------------

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(Fraction(other))
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0]

    def as_poly(self) -> list:
        """Representative polynomial in the generator, leading coefficient first."""
        return poly.strip(list(reversed(self.coeffs)))

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a * other for a in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = self.field.degree
        if n == 1:
            return FieldElement(self.field, (self.coeffs[0] * other.coeffs[0],))
        a, b = self.coeffs, other.coeffs
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:n]
        for j, c in enumerate(prod[n:]):
            if c:
                row = self.field._reduce[j]
                out = [o + c * r for o, r in zip(out, row)]
        return FieldElement(self.field, [Fraction(o) for o in out])

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        if self.field.degree == 1:
            return FieldElement(self.field, (1 / self.coeffs[0],))
        s, _, h = poly.gcdex(self.as_poly(), list(self.field.min_poly))
        # min_poly is irreducible, so h == 1
        return self.field(list(reversed(s)))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement(self.field, [a / other for a in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    # real embeddings ----------------------------------------------------

    def embed(self, e: int | None = None) -> CertifiedReal:
        """The image of this element under embedding ``e`` (default: identity)."""
        field = self.field
        e = field.identity_embedding if e is None else e
        if self.is_rational():
            return CertifiedReal.exact(self.coeffs[0])
        coeffs = self.coeffs

        def fn(prec):
            a, b = field.root_interval(e, Fraction(1, 1 << (prec + 8)))
            x = iv.make_mpf((_mpq(a)._mpi_[0], _mpq(b)._mpi_[1]))
            acc = _mpq(coeffs[-1])
            for c in reversed(coeffs[:-1]):
                acc = acc * x + _mpq(c)
            return acc

        return CertifiedReal(fn)

    def sign(self, e: int | None = None) -> int:
        return sign_at(self, e)

    def __repr__(self):
        if self.is_rational():
            return f"{self.coeffs[0]}"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*a" if i == 1 else f"{c}*a^{i}")
        return " + ".join(terms) or "0"


def sign_at(x: FieldElement, e: int | None = None) -> int:
    """Certified sign of ``x`` at embedding ``e``; 0 only for the zero element."""
    if x.is_zero():
        return 0
    if x.is_rational():
        c = x.coeffs[0]
        return 1 if c > 0 else -1
    value = x.embed(e)
    prec = START_PREC
    while prec <= MAX_PREC:
        lo, hi = value.interval(prec)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        prec *= 2
    raise PrecisionExhausted("sign of a nonzero field element not resolved")


class EmbeddingContext:
    """Real context (for :mod:`hypsys.poly`) of a field at one embedding."""

    def __init__(self, field: NumberField, e: int):
        self.field = field
        self.e = e

    def sign(self, c) -> int:
        if isinstance(c, FieldElement):
            return sign_at(c, self.e)
        return (c > 0) - (c < 0)

    def abs_upper(self, c) -> Fraction:
        if not isinstance(c, FieldElement):
            return abs(Fraction(c))
        lo, hi = c.embed(self.e).interval(START_PREC)
        return max(abs(lo), abs(hi))

    def certified(self, c) -> CertifiedReal:
        if isinstance(c, FieldElement):
            return c.embed(self.e)
        return CertifiedReal.exact(c)


def _poly_str(f) -> str:
    return "[" + ", ".join(str(c) for c in f) + "]"


def _sympy_poly(f):
    x = sympy.Symbol("x")
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in f], x, domain="QQ")


def _from_sympy(p) -> list:
    return [Fraction(int(c.p), int(c.q)) for c in p.all_coeffs()]


def factor_rational(f) -> list[list]:
    """Monic irreducible factors of a rational polynomial (via sympy)."""
    _, factors = _sympy_poly(poly.monic(f)).factor_list()
    return [poly.monic(_from_sympy(p)) for p, _ in factors]


def make_field(min_poly, identity_embedding: int | None = None) -> NumberField:
    """Build the totally real field defined by ``min_poly`` (leading coefficient first).

    The identity embedding defaults to the largest real root.
    """
    f = poly.fractions([parse_rational(c) for c in min_poly])
    if len(f) < 2:
        raise InputError("minimal polynomial must have degree >= 1")
    if f[0] != 1:
        raise InputError("minimal polynomial must be monic")
    n = len(f) - 1
    if n > 1 and not _sympy_poly(f).is_irreducible:
        raise NotIrreducible(f"{_poly_str(f)} is reducible over Q")
    if n == 1:
        roots = [poly.RealRoot([Fraction(1), Fraction(0)], poly.RATIONAL, 0, 0)]
        f = [Fraction(1), Fraction(0)]
    else:
        roots = poly.real_roots(f)
        if len(roots) != n:
            raise NotTotallyReal(f"{_poly_str(f)} has {n - len(roots)} non-real roots")
    if identity_embedding is None:
        identity_embedding = n - 1 if n > 1 else 0
    if not 0 <= identity_embedding < len(roots):
        raise InputError(f"embedding index {identity_embedding} out of range")
    return NumberField(f, roots, identity_embedding)


QQ = make_field([1, 0])


def _cyclotomic(p: int) -> list:
    x = sympy.Symbol("x")
    return _from_sympy(sympy.Poly(sympy.cyclotomic_poly(p, x), x, domain="QQ"))


def cos_field(p: int) -> tuple[NumberField, FieldElement]:
    """``Q(cos(2*pi/p))`` generated by the algebraic integer ``2*cos(2*pi/p)``.

    Returns the field and the element ``cos(2*pi/p)``.
    """
    if not isinstance(p, int) or p < 3:
        raise InputError("cos_field needs an integer p >= 3")
    t = poly.to_trace(_cyclotomic(p))
    if len(t) == 2:
        return QQ, QQ(-t[1] / 2)
    field = make_field(t)
    return field, field.gen / 2


def two_cos(q: int, p: int, field: NumberField, gen: FieldElement) -> FieldElement:
    """``2*cos(2*pi*q/p)`` as a polynomial in ``gen = 2*cos(2*pi/p)``."""
    q = q % p
    prev, cur = field(2), gen
    if q == 0:
        return prev
    for _ in range(q - 1):
        prev, cur = cur, gen * cur - prev
    return cur


class FieldHom:
    """Embedding of ``source`` into ``target`` fixed by the image of the generator."""

    def __init__(self, source: NumberField, target: NumberField, gen_image: FieldElement):
        self.source = source
        self.target = target
        self.gen_image = target(gen_image)

    def __call__(self, x) -> FieldElement:
        if not isinstance(x, FieldElement):
            return self.target(x)
        if x.field != self.source:
            raise FieldMismatch("element is not in the source field")
        return poly.evaluate(x.as_poly(), self.gen_image) if x.as_poly() else self.target.zero

    def __repr__(self):
        return f"FieldHom({self.source!r} -> {self.target!r}, gen -> {self.gen_image!r})"


def _identity_hom(k: NumberField) -> FieldHom:
    return FieldHom(k, k, k.gen)


def _rational_hom(target: NumberField) -> FieldHom:
    return FieldHom(QQ, target, target(QQ.gen.to_rational()))


def _resultant_charpoly(f, g, t: int) -> list:
    """``Res_y(f(y), g(x - t*y))`` up to sign, made monic."""
    x, y = sympy.symbols("x y")
    fy = sum(sympy.Rational(c.numerator, c.denominator) * y ** (len(f) - 1 - i) for i, c in enumerate(f))
    gx = sum(sympy.Rational(c.numerator, c.denominator) * (x - t * y) ** (len(g) - 1 - i) for i, c in enumerate(g))
    r = sympy.Poly(sympy.resultant(fy, gx, y), x, domain="QQ")
    return poly.monic(_from_sympy(r))


def _locate_root(candidates, value: CertifiedReal) -> tuple[int, int]:
    """Find which isolated root (factor index, root index) equals ``value``."""
    prec = START_PREC
    while prec <= MAX_PREC:
        lo, hi = value.interval(prec)
        w = Fraction(1, 1 << prec)
        hits = []
        for fi, roots in enumerate(candidates):
            for ri, r in enumerate(roots):
                a, b = r.refine_to(w)
                if a <= hi and lo <= b:
                    hits.append((fi, ri))
        if len(hits) == 1:
            return hits[0]
        prec *= 2
    raise PrecisionExhausted("could not match the generator value to a root")


def compositum(k1: NumberField, k2: NumberField, max_t: int = 32):
    """Smallest field containing ``k1`` and ``k2`` (compatible identity embeddings).

    Returns ``(K, phi1, phi2)`` with ``phi_i`` the embeddings of ``k_i`` into ``K``.
    The primitive element is searched as ``g1 + t*g2`` for ``t = 1 .. max_t``.
    """
    if k1.is_rational:
        return k2, _rational_hom(k2), _identity_hom(k2)
    if k2.is_rational:
        return k1, _identity_hom(k1), _rational_hom(k1)
    if k1 == k2:
        return k1, _identity_hom(k1), _identity_hom(k1)
    f, g = list(k1.min_poly), list(k2.min_poly)
    a_val, b_val = k1.root_value(), k2.root_value()
    for t in range(1, max_t + 1):
        h = _resultant_charpoly(f, g, t)
        if len(poly.gcd(h, poly.diff(h))) > 1:
            continue
        factors = factor_rational(h)
        candidates = [poly.real_roots(fac) for fac in factors]
        fi, ri = _locate_root(candidates, a_val + t * b_val)
        K = make_field(factors[fi], identity_embedding=ri)
        c = K.gen
        # b is the common root of g(y) and f(c - t*y) over K
        gK = [K(x) for x in g]
        fK = poly.compose([K(x) for x in f], [K(-t), c])
        common = poly.gcd(gK, fK)
        if len(common) != 2:
            continue
        beta = -common[1]
        alpha = c - beta * t
        return K, FieldHom(k1, K, alpha), FieldHom(k2, K, beta)
    raise PrimitiveElementSearchExceeded(f"no primitive element g1 + t*g2 with t <= {max_t}")


def _charpoly_rational(A) -> list:
    """Characteristic polynomial (Faddeev-LeVerrier) of a rational matrix."""
    n = len(A)
    coeffs = [Fraction(1)]
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        c_prev = coeffs[-1]
        AM = [[sum(A[i][l] * M[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        M = [[AM[i][j] + (c_prev if i == j else 0) for j in range(n)] for i in range(n)]
        AM = [[sum(A[i][l] * M[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        coeffs.append(-sum(AM[i][i] for i in range(n)) / k)
    return coeffs


def multiplication_matrix(x: FieldElement) -> list[list[Fraction]]:
    """Matrix of ``y -> x*y`` in the power basis (columns are images of basis vectors)."""
    k = x.field
    n = k.degree
    cols = []
    basis = k.one
    for _ in range(n):
        cols.append((x * basis).coeffs)
        basis = basis * k.gen if n > 1 else basis
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def min_poly_of(x: FieldElement) -> list[Fraction]:
    """Monic minimal polynomial of ``x`` over Q (leading coefficient first)."""
    if x.is_rational():
        return [Fraction(1), -x.coeffs[0]]
    return poly.sqf_part(_charpoly_rational(multiplication_matrix(x)))


def is_algebraic_integer(x: FieldElement) -> bool:
    return all(c.denominator == 1 for c in min_poly_of(x))


def lcm_denominator(values) -> int:
    out = 1
    for q in values:
        d = q.denominator
        out = out * d // igcd(out, d)
    return out
