"""Orientation-preserving isometries of hyperbolic space with entries in k.

Spectral data come from the characteristic polynomial: after removing the
eigenvalues +1 and -1, the rest is reciprocal and is rewritten in
``y = x + 1/x``.  A root ``y > 2`` is the loxodromic pair ``lambda, 1/lambda``
(``y = 2 cosh l``); roots in ``(-2, 2)`` are rotation pairs ``e^{+-i theta}``
(``y = 2 cos theta``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property, reduce
from itertools import permutations
from typing import Optional

import mpmath
import sympy

from . import linalg, poly
from .certified import CertifiedReal, as_certified, cr_max, cr_min
from .errors import (
    CayleyChartMiss,
    DimensionMismatch,
    InputError,
    NotIsometry,
    NotLoxodromic,
    NotOrthochronous,
    Singular,
)
from .hypgeom import HalfSpace, HPlane, is_isometry, is_orthochronous
from .numfield import (
    QQ,
    FieldElement,
    NumberField,
    factor_rational,
    make_field,
    _locate_root,
)
from .quadform import QuadraticForm


class IsometryKind(str, Enum):
    IDENTITY = "Identity"
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    LOXODROMIC = "Loxodromic"


@dataclass
class _Spectrum:
    plus_one: int
    minus_one: int
    trace_poly: list
    stretch: Optional[tuple]  # (factor over k, RealRoot) for the root > 2
    rotations: list  # (factor over k, RealRoot, multiplicity) for roots in (-2, 2)


def _root_value(f, root) -> CertifiedReal:
    if len(f) == 2:
        return (-f[1] / f[0]).embed()
    return root.certified()


class IsometryK:
    """A matrix over k preserving the form exactly, with det 1, preserving the sheets."""

    def __init__(self, matrix, form: QuadraticForm, check: bool = True):
        self.form = form
        self.field = form.field
        self.matrix = linalg.to_matrix(form.field, matrix)
        if len(self.matrix) != form.dim:
            raise DimensionMismatch(f"matrix size {len(self.matrix)} does not match form dimension {form.dim}")
        if check:
            if not is_isometry(self.matrix, form):
                raise NotIsometry("matrix does not preserve the form (or det != 1)")
            if not is_orthochronous(self.matrix, form):
                raise NotOrthochronous("matrix exchanges the two sheets")

    @property
    def d(self) -> int:
        return self.form.dim - 1

    @cached_property
    def char_poly(self) -> list:
        return linalg.charpoly(self.matrix)

    # group operations ---------------------------------------------------

    def __mul__(self, other: "IsometryK") -> "IsometryK":
        return IsometryK(linalg.matmul(self.matrix, other.matrix), self.form, check=False)

    def inverse(self) -> "IsometryK":
        # g^{-1} = Q^{-1} g^t Q for an isometry
        Q = self.form.gram
        Qi = _form_inverse(self.form)
        return IsometryK(linalg.matmul(Qi, linalg.matmul(linalg.transpose(self.matrix), Q)), self.form, check=False)

    def __pow__(self, n: int) -> "IsometryK":
        if n < 0:
            return self.inverse() ** (-n)
        return IsometryK(linalg.power(self.matrix, n), self.form, check=False)

    def conjugate(self, h: "IsometryK") -> "IsometryK":
        """``h g h^{-1}``."""
        return h * self * h.inverse()

    def __eq__(self, other):
        return isinstance(other, IsometryK) and self.form == other.form and linalg.equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(tuple(x for row in self.matrix for x in row))

    def is_identity(self) -> bool:
        return linalg.is_identity(self.matrix)

    def apply(self, obj):
        if isinstance(obj, (HPlane, HalfSpace)):
            return obj.image(self.matrix)
        return linalg.matvec(self.matrix, [self.field(x) for x in obj])

    def real_matrix(self):
        return [[x.embed() for x in row] for row in self.matrix]

    # spectral data ------------------------------------------------------

    @cached_property
    def spectrum(self) -> _Spectrum:
        k = self.field
        f = self.char_poly
        f, a = poly.divide_out_root(f, k.one)
        f, b = poly.divide_out_root(f, -k.one)
        if len(f) == 1:
            return _Spectrum(a, b, [k.one], None, [])
        T = poly.to_trace(f)
        ctx = k.context()
        stretch = None
        rotations = []
        for fac, mult in poly.sqf_list(T):
            big = poly.real_roots(fac, ctx, lo=Fraction(2))
            if big:
                if len(big) > 1 or mult > 1 or stretch is not None:
                    raise NotIsometry("more than one eigenvalue pair off the unit circle")
                stretch = (fac, big[0])
            for r in poly.real_roots(fac, ctx, lo=Fraction(-2), hi=Fraction(2)):
                rotations.append((fac, r, mult))
        return _Spectrum(a, b, T, stretch, rotations)

    def __repr__(self):
        return f"IsometryK(d={self.d}, field={self.field!r})"


def _form_inverse(form: QuadraticForm):
    inv = form.__dict__.get("_inverse")
    if inv is None:
        inv = linalg.inverse(form.gram)
        form.__dict__["_inverse"] = inv
    return inv


def classify(g: IsometryK) -> IsometryKind:
    if g.is_identity():
        return IsometryKind.IDENTITY
    if g.spectrum.stretch is not None:
        return IsometryKind.LOXODROMIC
    # semisimple iff the square-free part of the characteristic polynomial kills g
    sf = poly.sqf_part(g.char_poly)
    k = g.field
    acc = linalg.zeros(k, g.form.dim)
    for c in sf:
        acc = linalg.matmul(acc, g.matrix)
        for i in range(g.form.dim):
            acc[i][i] = acc[i][i] + c
    return IsometryKind.ELLIPTIC if linalg.is_zero(acc) else IsometryKind.PARABOLIC


def stretch_factor(g: IsometryK) -> CertifiedReal:
    """The eigenvalue ``lambda > 1`` of a loxodromic ``g``."""
    sp = g.spectrum
    if sp.stretch is None:
        raise NotLoxodromic("isometry is not loxodromic")
    y = _root_value(*sp.stretch)
    return (y + (y * y - 4).sqrt()) / 2


def translation_length(g: IsometryK) -> CertifiedReal:
    sp = g.spectrum
    if sp.stretch is None:
        raise NotLoxodromic("isometry is not loxodromic")
    return (_root_value(*sp.stretch) / 2).acosh()


# --------------------------------------------------------------------------
# holonomy


def _sym_poly(f):
    x = sympy.Symbol("x")
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in f], x, domain="QQ")


def _rational_norm(f) -> list:
    """A rational polynomial divisible by ``f`` (its norm from k down to Q)."""
    coeffs = [c for c in f]
    if not isinstance(coeffs[0], FieldElement):
        return [Fraction(c) for c in coeffs]
    k = coeffs[0].field
    if all(c.is_rational() for c in coeffs):
        return [c.to_rational() for c in coeffs]
    y, z = sympy.symbols("y z")
    m = sum(sympy.Rational(c.numerator, c.denominator) * z ** (k.degree - i) for i, c in enumerate(k.min_poly))
    n = len(coeffs) - 1
    F = 0
    for i, c in enumerate(coeffs):
        cz = sum(sympy.Rational(q.numerator, q.denominator) * z ** j for j, q in enumerate(c.coeffs))
        F += cz * y ** (n - i)
    r = sympy.Poly(sympy.resultant(m, F, z), y, domain="QQ")
    return [Fraction(int(c.p), int(c.q)) for c in r.all_coeffs()]


def algebraic_key(f, value: CertifiedReal) -> tuple:
    """Canonical exact key ``(minimal polynomial over Q, root index)`` of a real algebraic number.

    ``f`` is any polynomial (over Q or k) having the number as a root.
    """
    candidates_f = factor_rational(_rational_norm(f))
    candidates = [poly.real_roots(c) for c in candidates_f]
    fi, ri = _locate_root(candidates, value)
    return tuple(str(c) for c in candidates_f[fi]), ri


_MINUS_TWO = (("1", "2"), 0)  # y = -2, i.e. the angle pi


class HolonomyClass:
    """Rotation part of a loxodromic, up to conjugacy in O(d-1).

    ``angles`` are sorted rotation angles in ``(0, pi]`` with multiplicity;
    ``trivial_count`` counts eigenvalues equal to 1.  ``keys`` identify each
    ``2 cos(angle)`` exactly, which makes equality and order tests exact; they
    may be supplied lazily through ``key_fn``.
    """

    def __init__(self, d: int, angles, trivial_count: int, keys=None, key_fn=None):
        self.d = d
        self.angles = list(angles)
        self.trivial_count = trivial_count
        self._keys = keys
        self._key_fn = key_fn

    @property
    def keys(self) -> Optional[list]:
        if self._keys is None and self._key_fn is not None:
            self._keys = self._key_fn()
        return self._keys

    def __repr__(self):
        return f"HolonomyClass(d={self.d}, angles={[float(a) for a in self.angles]}, trivial={self.trivial_count})"

    def padded(self) -> list:
        m = (self.d - 1) // 2
        return list(self.angles) + [CertifiedReal.exact(0)] * (m - len(self.angles))

    def same_class(self, other: "HolonomyClass") -> Optional[bool]:
        """Exact equality when both carry keys, else ``None``."""
        if self.keys is None or other.keys is None:
            return None
        return self.d == other.d and sorted(self.keys) == sorted(other.keys)

    def to_json(self, digits: int = 30) -> dict:
        return {
            "angles": [list(a.decimal(digits)) for a in self.angles],
            "trivial_count": self.trivial_count,
        }

    @classmethod
    def from_rational_angles(cls, d: int, fractions) -> "HolonomyClass":
        """Class with angles ``2*pi*q/p`` given as pairs ``(q, p)``."""
        angles, keys = [], []
        for q, p in fractions:
            q %= p
            if q == 0:
                continue
            if 2 * q > p:
                q = p - q
            theta = 2 * CertifiedReal.pi() * Fraction(q, p)
            angles.append(theta)
            if 2 * q == p:
                keys.append(_MINUS_TWO)
            else:
                y = 2 * theta.cos()
                keys.append(algebraic_key(_cos_minpoly(p), y))
        nontrivial = sum(2 for _ in angles)
        if nontrivial > d - 1:
            raise DimensionMismatch("too many angles for the dimension")
        order = sorted(range(len(angles)), key=lambda i: angles[i].mid())
        return cls(d, [angles[i] for i in order], d - 1 - nontrivial, [keys[i] for i in order])


def _cos_minpoly(p: int) -> list:
    x = sympy.Symbol("x")
    cyc = sympy.Poly(sympy.cyclotomic_poly(p, x), x, domain="QQ")
    return poly.to_trace([Fraction(int(c.p), int(c.q)) for c in cyc.all_coeffs()])


def holonomy(g: IsometryK) -> HolonomyClass:
    sp = g.spectrum
    if sp.stretch is None:
        raise NotLoxodromic("holonomy is defined for loxodromic isometries")
    entries = []
    for fac, root, mult in sp.rotations:
        theta = (_root_value(fac, root) / 2).acos()
        entries.extend([(theta, fac, root)] * mult)
    angles = [e[0] for e in entries]
    pis = sp.minus_one // 2
    angles += [CertifiedReal.pi()] * pis
    order = sorted(range(len(angles)), key=lambda i: angles[i].mid())

    def keys():
        out = [algebraic_key(fac, _root_value(fac, root)) for _, fac, root in entries]
        return out + [_MINUS_TWO] * pis

    return HolonomyClass(g.d, [angles[i] for i in order], sp.plus_one, key_fn=keys)


@dataclass
class ComplexLength:
    length: CertifiedReal
    holonomy: HolonomyClass

    def to_json(self, digits: int = 30) -> dict:
        return {"length": list(self.length.decimal(digits)), "holonomy": self.holonomy.to_json(digits)}


def complex_length(g: IsometryK) -> ComplexLength:
    return ComplexLength(translation_length(g), holonomy(g))


def holonomy_distance(h1: HolonomyClass, h2: HolonomyClass) -> CertifiedReal:
    """Bottleneck distance between the padded angle multisets."""
    if h1.d != h2.d:
        raise DimensionMismatch(f"holonomy classes for d={h1.d} and d={h2.d}")
    if h1.same_class(h2):
        return CertifiedReal.exact(0)
    a, b = h1.padded(), h2.padded()
    if not a:
        return CertifiedReal.exact(0)
    if len(a) <= 6:
        costs = []
        for perm in permutations(range(len(b))):
            costs.append(cr_max([abs(x - b[j]) for x, j in zip(a, perm)]))
        return cr_min(costs)
    # on a line the sorted matching is a bottleneck-optimal matching
    a = sorted(a, key=lambda t: t.mid())
    b = sorted(b, key=lambda t: t.mid())
    return cr_max([abs(x - y) for x, y in zip(a, b)])


def _cyclotomic_order(key) -> Optional[int]:
    """Order ``n`` when ``y = 2 cos(2 pi j / n)`` with ``gcd(j, n) = 1``, else None."""
    if key == _MINUS_TWO:
        return 2
    f = [Fraction(c) for c in key[0]]
    mu_poly = poly.from_trace(f)
    if not _sym_poly(mu_poly).is_cyclotomic:
        return None
    deg = len(mu_poly) - 1
    n = 3
    while True:
        if sympy.totient(n) == deg and _cos_minpoly(n) == f:
            return n
        n += 1


def holonomy_order(h: HolonomyClass):
    """Order of the rotation part (``math.inf`` when some angle is irrational)."""
    if h.keys is None:
        raise InputError("holonomy class carries no exact eigenvalue data")
    orders = []
    for key in h.keys:
        n = _cyclotomic_order(key)
        if n is None:
            return math.inf
        orders.append(n)
    return reduce(lambda x, y: x * y // math.gcd(x, y), orders, 1)


# --------------------------------------------------------------------------
# Cayley transform and approximation


def skew_basis(Q: QuadraticForm) -> list:
    """Basis ``Q^{-1}(E_ij - E_ji)`` of the q-skew matrices ``X^t Q + Q X = 0``."""
    k = Q.field
    n = Q.dim
    Qi = _form_inverse(Q)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            W = linalg.zeros(k, n)
            W[i][j] = k.one
            W[j][i] = -k.one
            out.append(linalg.matmul(Qi, W))
    return out


def is_skew(X, Q: QuadraticForm) -> bool:
    A = linalg.matmul(linalg.transpose(X), Q.gram)
    return linalg.is_zero(linalg.add(A, linalg.matmul(Q.gram, X)))


def cayley(X, Q: QuadraticForm) -> IsometryK:
    """``(I + X)(I - X)^{-1}`` for a q-skew ``X`` over k."""
    k = Q.field
    X = linalg.to_matrix(k, X)
    if not is_skew(X, Q):
        raise InputError("matrix is not skew for the form")
    I = linalg.identity(k, Q.dim)
    try:
        inv = linalg.inverse(linalg.sub(I, X))
    except Singular:
        raise Singular("I - X is singular (X has eigenvalue 1)") from None
    g = linalg.matmul(linalg.add(I, X), inv)
    if not is_orthochronous(g, Q):
        raise NotOrthochronous("Cayley image exchanges the sheets")
    return IsometryK(g, Q, check=False)


def inverse_cayley(g: IsometryK):
    """``(g - I)(g + I)^{-1}``, exact over k."""
    k = g.field
    I = linalg.identity(k, g.form.dim)
    try:
        inv = linalg.inverse(linalg.add(g.matrix, I))
    except Singular:
        raise CayleyChartMiss("g has eigenvalue -1") from None
    return linalg.matmul(linalg.sub(g.matrix, I), inv)


def _to_mp(x):
    if isinstance(x, CertifiedReal):
        lo, hi = x.enclose_fractions(Fraction(1, 1 << (mpmath.mp.prec + 8)))
        m = (lo + hi) / 2
        return mpmath.mpf(m.numerator) / m.denominator
    if isinstance(x, FieldElement):
        return _to_mp(x.embed())
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _rational(x, tol: Fraction) -> Fraction:
    q = Fraction(mpmath.nstr(x, mpmath.mp.dps, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)) if x else Fraction(0)
    den = 1
    while True:
        r = q.limit_denominator(den)
        if abs(r - q) < tol:
            return r
        den *= 4


def _max_residual(g: IsometryK, target) -> CertifiedReal:
    diffs = []
    for row, trow in zip(g.matrix, target):
        for x, t in zip(row, trow):
            diffs.append(abs(x.embed() - as_certified(t)))
    return cr_max(diffs)


def _fixed_shift(Q: QuadraticForm) -> IsometryK:
    """A fixed k-isometry used to move targets off the Cayley chart boundary."""
    # a product of half-turn-free small rotations in several coordinate planes
    basis = skew_basis(Q)
    g = None
    for X in basis:
        try:
            h = cayley(linalg.scale(X, Fraction(1, 3)), Q)
        except (Singular, NotOrthochronous):
            continue
        g = h if g is None else g * h
    if g is None:
        raise CayleyChartMiss("no auxiliary isometry available")
    return g


def approximate(target, eps, Q: QuadraticForm, max_rounds: int = 12, _shifted: bool = False) -> IsometryK:
    """A point of SO'(q, k) within ``eps`` (max entry) of a real isometry ``target``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    n = Q.dim
    if len(target) != n or any(len(r) != n for r in target):
        raise DimensionMismatch("target size does not match the form")
    k = Q.field
    with mpmath.workdps(max(50, 3 * int(-math.log10(float(eps))) + 30)):
        G = mpmath.matrix([[_to_mp(x) for x in row] for row in target])
        Qr = mpmath.matrix([[_to_mp(x) for x in row] for row in Q.gram])
        I = mpmath.eye(n)
        resid = mpmath.mnorm(G.T * Qr * G - Qr, 1)
        if resid > mpmath.mpf(10) ** -8 * max(1, mpmath.mnorm(G, 1) ** 2):
            raise NotIsometry("target does not preserve the form")
        try:
            cond = mpmath.mnorm(G + I, 1) * mpmath.mnorm((G + I) ** -1, 1)
        except ZeroDivisionError:
            cond = mpmath.inf
        if cond > 10 ** 8:
            if _shifted:
                raise CayleyChartMiss("target is too close to the Cayley chart boundary")
            h = _fixed_shift(Q)
            hinv = h.inverse()
            Hi = mpmath.matrix([[_to_mp(x) for x in row] for row in hinv.matrix])
            Hm = mpmath.matrix([[_to_mp(x) for x in row] for row in h.matrix])
            scale_ = max(1, float(mpmath.mnorm(Hm, mpmath.inf)))
            sub_eps = eps / Fraction(math.ceil(scale_ * n))
            shifted = Hi * G
            inner = approximate([[shifted[i, j] for j in range(n)] for i in range(n)], sub_eps, Q,
                                max_rounds, _shifted=True)
            return h * inner
        X = (G - I) * (G + I) ** -1
        W = Qr * X
    tol = eps / 16
    for _ in range(max_rounds):
        Wk = linalg.zeros(k, n)
        for i in range(n):
            for j in range(i + 1, n):
                w = _rational(W[i, j], tol)
                Wk[i][j] = k(w)
                Wk[j][i] = k(-w)
        Xk = linalg.matmul(_form_inverse(Q), Wk)
        try:
            g = cayley(Xk, Q)
        except (Singular, NotOrthochronous):
            tol /= 16
            continue
        if (_max_residual(g, target) - eps).sign() < 0:
            return g
        tol /= 16
    raise CayleyChartMiss("could not reach the requested accuracy")


def build_infinite_holonomy_example(d: int, eps) -> IsometryK:
    """Loxodromic with rotation part ``diag(R, I)`` (R of infinite order) and length below ``eps``.

    Works over ``Q(sqrt 2)`` with the form ``x_0^2 + ... + x_{d-1}^2 - sqrt(2) x_d^2``.
    """
    if d < 3:
        raise InputError("need d >= 3")
    eps = Fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    k = make_field([1, 0, -2])
    r2 = k.gen
    form = QuadraticForm.diagonal(k, [1] * d + [-r2])
    small = QuadraticForm.diagonal(k, [1, -r2])
    s = Fraction(1, 10)
    while True:
        T = cayley([[0, r2 * s], [s, 0]], small)
        if (translation_length(T) - eps).sign() < 0:
            break
        s /= 10
    R = [[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]]
    A = linalg.block_diag(k, R, linalg.identity(k, d - 3)) if d > 3 else linalg.to_matrix(k, R)
    g = linalg.block_diag(k, A, T.matrix)
    return IsometryK(g, form)
