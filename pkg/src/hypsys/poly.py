"""Dense univariate polynomials over an exact coefficient field.

Polynomials are plain lists with the leading coefficient first (``[1, -3, 1]``
is ``x**2 - 3*x + 1``); the zero polynomial is ``[]``.  Coefficients may be
``Fraction`` or number-field elements: the routines only use ring operations,
division by nonzero coefficients and comparison with ``0``.

Real root isolation is done with Sturm sequences.  The caller supplies a
*real context* that knows how to take certified signs of coefficients at a
fixed real embedding, which makes the same code work over Q and over any
totally real field.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from .certified import CertifiedReal, _mpq
from mpmath import iv

__all__ = [
    "strip", "degree", "add", "sub", "neg", "mul", "scale", "divmod_poly",
    "rem", "quo", "exquo", "monic", "gcd", "gcdex", "diff", "evaluate",
    "compose", "sqf_list", "sqf_part", "sturm_sequence", "is_palindromic",
    "to_trace", "from_trace", "power_sums", "divide_out_root", "pow_poly",
    "RationalContext", "RATIONAL", "count_real_roots", "isolate_real_roots",
    "RealRoot", "real_roots", "fractions",
]


def fractions(f) -> list:
    """Coerce an integer/rational coefficient list to ``Fraction``."""
    return strip([c if not isinstance(c, (int, str)) else Fraction(c) for c in f])


def strip(f) -> list:
    i = 0
    n = len(f)
    while i < n and f[i] == 0:
        i += 1
    return list(f[i:])


def degree(f) -> int:
    return len(f) - 1


def neg(f) -> list:
    return [-c for c in f]


def add(f, g) -> list:
    if len(f) < len(g):
        f, g = g, f
    d = len(f) - len(g)
    return strip(list(f[:d]) + [a + b for a, b in zip(f[d:], g)])


def sub(f, g) -> list:
    return add(f, neg(g))


def scale(f, c) -> list:
    return strip([a * c for a in f])


def mul(f, g) -> list:
    if not f or not g:
        return []
    out = [f[0] * 0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return strip(out)


def pow_poly(f, n: int) -> list:
    result = [f[0] * 0 + 1] if f else []
    base = list(f)
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def divmod_poly(f, g) -> tuple[list, list]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    lc = g[0]
    n = len(g)
    if len(f) < n:
        return [], strip(f)
    q = []
    for i in range(len(f) - n + 1):
        c = f[i] / lc
        q.append(c)
        if c == 0:
            continue
        for j in range(1, n):
            f[i + j] = f[i + j] - c * g[j]
    return strip(q), strip(f[len(f) - n + 1:])


def rem(f, g) -> list:
    return divmod_poly(f, g)[1]


def quo(f, g) -> list:
    return divmod_poly(f, g)[0]


def exquo(f, g) -> list:
    q, r = divmod_poly(f, g)
    if r:
        raise ArithmeticError("polynomial division is not exact")
    return q


def monic(f) -> list:
    if not f:
        return []
    lc = f[0]
    if lc == 1:
        return list(f)
    return [c / lc for c in f]


def gcd(f, g) -> list:
    """Monic greatest common divisor."""
    f, g = strip(f), strip(g)
    while g:
        f, g = g, monic(rem(f, g))
    return monic(f)


def gcdex(f, g) -> tuple[list, list, list]:
    """Return ``(s, t, h)`` with ``s*f + t*g = h = gcd(f, g)`` and ``h`` monic."""
    one = (f or g)[0] * 0 + 1
    r0, r1 = strip(f), strip(g)
    s0, s1 = [one], []
    t0, t1 = [], [one]
    while r1:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    if not r0:
        return s0, t0, r0
    lc = r0[0]
    return scale(s0, 1 / lc), scale(t0, 1 / lc), monic(r0)


def diff(f) -> list:
    n = len(f) - 1
    return strip([c * (n - i) for i, c in enumerate(f[:-1])])


def evaluate(f, x):
    if not f:
        return x * 0
    acc = f[0]
    for c in f[1:]:
        acc = acc * x + c
    return acc


def compose(f, g) -> list:
    """``f(g(x))``."""
    if not f:
        return []
    acc = [f[0]]
    for c in f[1:]:
        acc = add(mul(acc, g), [c])
    return acc


def sqf_list(f) -> list[tuple[list, int]]:
    """Yun's square-free decomposition of a nonzero polynomial.

    Returns monic factors with multiplicities; their product is ``monic(f)``.
    """
    f = monic(strip(f))
    if len(f) <= 1:
        return []
    df = diff(f)
    a = gcd(f, df)
    b = exquo(f, a)
    c = exquo(df, a)
    d = sub(c, diff(b))
    out = []
    i = 1
    while len(b) > 1:
        a = gcd(b, d)
        b = exquo(b, a)
        c = exquo(d, a)
        d = sub(c, diff(b))
        if len(a) > 1:
            out.append((monic(a), i))
        i += 1
    return out


def sqf_part(f) -> list:
    f = strip(f)
    if len(f) <= 1:
        return monic(f)
    return monic(exquo(f, gcd(f, diff(f))))


def is_palindromic(f) -> bool:
    f = strip(f)
    return all(a == b for a, b in zip(f, reversed(f)))


def _dickson(m: int, one) -> list[list]:
    """``D_j(y) = x**j + x**-j`` expressed in ``y = x + 1/x`` for ``j <= m``."""
    two = one + one
    D = [[two], [one, one * 0]]
    for _ in range(2, m + 1):
        D.append(sub(mul([one, one * 0], D[-1]), D[-2]))
    return D[: m + 1]


def to_trace(f) -> list:
    """Trace polynomial ``t`` with ``f(x) = x**m * t(x + 1/x)``.

    ``f`` must be palindromic of even degree ``2m``.
    """
    f = strip(f)
    n = len(f) - 1
    if n % 2 or not is_palindromic(f):
        raise ValueError("trace polynomial needs a palindromic polynomial of even degree")
    m = n // 2
    one = f[0] * 0 + 1
    # coefficient of x**(m + j) sits at index n - (m + j) = m - j
    D = _dickson(m, one)
    t = [f[m]]
    for j in range(1, m + 1):
        t = add(t, scale(D[j], f[m - j]))
    return t


def from_trace(t) -> list:
    """Palindromic ``f(x) = x**m * t(x + 1/x)`` of degree ``2m``."""
    t = strip(t)
    m = len(t) - 1
    one = t[0] * 0 + 1
    zero = one * 0
    sq = [one, zero, one]  # x**2 + 1
    f = []
    power = [one]
    # t = sum t_j y**j with t_j = t[m - j]; term t_j * x**(m-j) * (x**2+1)**j
    for j in range(m + 1):
        term = scale(power, t[m - j]) + [zero] * (m - j)
        f = add(f, term)
        power = mul(power, sq)
    return f


def power_sums(f, count: int) -> list:
    """Power sums ``[p_0, ..., p_{count-1}]`` of the roots of monic ``f``.

    Computed with Newton's identities, so they live in the coefficient field.
    """
    f = strip(f)
    if f[0] != 1:
        raise ValueError("power sums need a monic polynomial")
    n = len(f) - 1
    a = f  # a[i] is the coefficient of x**(n - i)
    zero = f[0] * 0
    p = [zero + n]
    for k in range(1, count):
        s = zero
        for i in range(1, min(k, n + 1)):
            s = s + a[i] * p[k - i]
        if k <= n:
            s = s + a[k] * k
        p.append(-s)
    return p[:count]


def divide_out_root(f, r) -> tuple[list, int]:
    """Divide ``f`` by ``(x - r)`` as often as possible; return quotient and count."""
    f = strip(f)
    one = f[0] * 0 + 1
    lin = [one, -r * one]
    m = 0
    while len(f) > 1 and evaluate(f, r) == 0:
        f = exquo(f, lin)
        m += 1
    return f, m


# --------------------------------------------------------------------------
# real roots


class RationalContext:
    """Real context for rational coefficients (the only embedding of Q)."""

    def sign(self, c) -> int:
        return (c > 0) - (c < 0)

    def abs_upper(self, c) -> Fraction:
        return abs(Fraction(c))

    def certified(self, c) -> CertifiedReal:
        return CertifiedReal.exact(c)


RATIONAL = RationalContext()


def sturm_sequence(f) -> list[list]:
    f = strip(f)
    seq = [f, diff(f)]
    while seq[-1]:
        r = rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(neg(r))
    return [s for s in seq if s]


def _variations(signs) -> int:
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_at(seq, ctx, x) -> int:
    if x is None:
        raise ValueError
    return _variations([ctx.sign(evaluate(p, x)) for p in seq])


def _sign_at_inf(seq, ctx, positive: bool) -> int:
    signs = []
    for p in seq:
        s = ctx.sign(p[0])
        if not positive and (len(p) - 1) % 2:
            s = -s
        signs.append(s)
    return _variations(signs)


def count_real_roots(f, ctx=RATIONAL, lo=None, hi=None, seq=None) -> int:
    """Number of distinct real roots in the open interval ``(lo, hi)``.

    ``None`` stands for an infinite endpoint; finite endpoints must not be
    roots of ``f``.
    """
    if seq is None:
        seq = sturm_sequence(f)
    f = seq[0]
    for x in (lo, hi):
        if x is not None and ctx.sign(evaluate(f, x)) == 0:
            raise ValueError(f"interval endpoint {x} is a root")
    v_lo = _sign_at_inf(seq, ctx, False) if lo is None else _sign_at(seq, ctx, lo)
    v_hi = _sign_at_inf(seq, ctx, True) if hi is None else _sign_at(seq, ctx, hi)
    return v_lo - v_hi


def root_bound(f, ctx=RATIONAL) -> Fraction:
    """Cauchy bound: every root at the embedding has absolute value below it."""
    f = strip(f)
    lc = f[0]
    m = Fraction(0)
    for c in f[1:]:
        if c == 0:
            continue
        m = max(m, ctx.abs_upper(c / lc))
    bound = 1 + m
    # round up to an integer keeps the bisection points dyadic
    return Fraction(-(-bound.numerator // bound.denominator))


_SPLITS = (Fraction(1, 2), Fraction(3, 8), Fraction(5, 8), Fraction(1, 4),
           Fraction(3, 4), Fraction(7, 16), Fraction(9, 16))


def _split_point(f, ctx, a, b):
    for t in _SPLITS:
        m = a + (b - a) * t
        if ctx.sign(evaluate(f, m)) != 0:
            return m
    raise ArithmeticError("no split point found")


def isolate_real_roots(f, ctx=RATIONAL, lo=None, hi=None) -> list[tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals for the distinct real roots in ``(lo, hi)``.

    Each returned ``(a, b)`` satisfies ``a < b`` and contains exactly one root
    in its interior; ``a`` and ``b`` are not roots.  Sorted ascending.
    """
    f = sqf_part(f)
    if len(f) <= 1:
        return []
    seq = sturm_sequence(f)
    B = root_bound(f, ctx)
    lo = -B if lo is None else max(Fraction(lo), -B)
    hi = B if hi is None else min(Fraction(hi), B)
    if lo >= hi:
        return []
    for x in (lo, hi):
        if ctx.sign(evaluate(f, x)) == 0:
            raise ValueError(f"interval endpoint {x} is a root")
    out = []
    stack = [(lo, hi, count_real_roots(f, ctx, lo, hi, seq))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = _split_point(f, ctx, a, b)
        n_left = count_real_roots(f, ctx, a, m, seq)
        stack.append((m, b, n - n_left))
        stack.append((a, m, n_left))
    out.sort()
    return out


class RealRoot:
    """A simple real root of ``f`` at a real embedding, refinable on demand."""

    def __init__(self, f, ctx, a: Fraction, b: Fraction):
        self.f = sqf_part(f)
        self.ctx = ctx
        self._lock = threading.Lock()
        self._a, self._b = Fraction(a), Fraction(b)
        self._exact = None
        if self._a == self._b:
            self._exact = self._a
            self._sign_a = 0
        else:
            self._sign_a = ctx.sign(evaluate(self.f, self._a))

    @property
    def exact(self) -> Fraction | None:
        return self._exact

    def interval(self) -> tuple[Fraction, Fraction]:
        return self._a, self._b

    def refine_to(self, width: Fraction) -> tuple[Fraction, Fraction]:
        with self._lock:
            while self._exact is None and self._b - self._a > width:
                m = (self._a + self._b) / 2
                s = self.ctx.sign(evaluate(self.f, m))
                if s == 0:
                    self._exact = m
                    self._a = self._b = m
                elif s == self._sign_a:
                    self._a = m
                else:
                    self._b = m
            return self._a, self._b

    def certified(self) -> CertifiedReal:
        def fn(prec):
            a, b = self.refine_to(Fraction(1, 1 << prec))
            return iv.make_mpf((_mpq(a)._mpi_[0], _mpq(b)._mpi_[1]))

        return CertifiedReal(fn)

    def __repr__(self):
        return f"RealRoot({float(self._a):.6g}..{float(self._b):.6g})"


def real_roots(f, ctx=RATIONAL, lo=None, hi=None) -> list[RealRoot]:
    f = sqf_part(f)
    return [RealRoot(f, ctx, a, b) for a, b in isolate_real_roots(f, ctx, lo, hi)]
