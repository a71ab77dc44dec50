"""Salem numbers and arithmetic loxodromics with prescribed complex length.

Given a Salem number ``lambda`` and rational rotation angles, the target
element is the block matrix ``diag(R(theta_1), ..., R(theta_m), boost(log lambda))``.
Its characteristic polynomial ``p`` is reciprocal with coefficients in a
totally real field k.  The companion matrix ``C`` of ``p`` preserves the
root-pairing form ``<u, w> = sum_{p(mu) = 0} r(mu) u(mu) w(1/mu)`` for every
symmetric ``r``, and when that form is admissible ``C`` is the required
element of ``SO'(q, O_k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from enum import Enum
from fractions import Fraction
from itertools import combinations, product
from typing import Optional

from . import linalg, poly
from .certified import CertifiedReal
from .errors import (
    CertificationError,
    DegenerateForm,
    DimensionMismatch,
    InputError,
    NoAdmissibleTwistFound,
    NotIntegerCoefficients,
    NotMonic,
    NotReciprocal,
    NotSeparable,
)
from .isometry import (
    ComplexLength,
    HolonomyClass,
    IsometryK,
    algebraic_key,
    complex_length,
    holonomy_distance,
)
from .numfield import (
    QQ,
    NumberField,
    cos_field,
    compositum,
    is_algebraic_integer,
    make_field,
    two_cos,
)
from .quadform import QuadraticForm, check_admissible, signature_profile


class SalemKind(str, Enum):
    SALEM = "Salem"
    QUADRATIC_VACUOUS = "SalemQuadraticVacuous"
    NOT_SALEM = "NotSalem"


@dataclass
class SalemCandidate:
    poly: list  # integer coefficients, leading first
    trace_factor: list  # rational factor of the trace polynomial with root lambda + 1/lambda
    trace_root: poly.RealRoot

    @property
    def trace(self) -> CertifiedReal:
        """``lambda + 1/lambda``."""
        if len(self.trace_factor) == 2:
            return CertifiedReal.exact(-self.trace_factor[1])
        return self.trace_root.certified()

    @property
    def lam(self) -> CertifiedReal:
        t = self.trace
        return (t + (t * t - 4).sqrt()) / 2

    @property
    def log_lambda(self) -> CertifiedReal:
        return (self.trace / 2).acosh()

    def lambda_interval(self, width=Fraction(1, 10**12)):
        return self.lam.enclose_fractions(width)


@dataclass
class SalemReport:
    kind: SalemKind
    candidate: Optional[SalemCandidate]
    reason: str = ""
    unit_circle_roots: int = 0

    def to_json(self, digits: int = 30) -> dict:
        out = {"kind": self.kind.value, "reason": self.reason, "unit_circle_roots": self.unit_circle_roots}
        if self.candidate is not None:
            out["lambda"] = list(self.candidate.lam.decimal(digits))
        return out


def _integer_poly(coeffs) -> list:
    out = []
    for c in coeffs:
        q = Fraction(c)
        if q.denominator != 1:
            raise NotIntegerCoefficients(f"coefficient {c} is not an integer")
        out.append(q)
    return out


def is_salem(coeffs) -> SalemReport:
    """Classify an integer polynomial (leading coefficient first) against the Salem definition."""
    f = _integer_poly(coeffs)
    f = poly.strip(f)
    if len(f) < 3:
        raise InputError("polynomial must have degree >= 2")
    if f[0] != 1:
        raise NotMonic("polynomial is not monic")
    if not poly.is_palindromic(f):
        return SalemReport(SalemKind.NOT_SALEM, None, "not reciprocal")
    r, _ = poly.divide_out_root(f, Fraction(1))
    r, _ = poly.divide_out_root(r, Fraction(-1))
    if len(r) == 1:
        return SalemReport(SalemKind.NOT_SALEM, None, "all roots are +-1")
    T = poly.to_trace(r)
    big, circle, cand = 0, 0, None
    for fac, mult in poly.sqf_list(T):
        above = poly.real_roots(fac, lo=Fraction(2))
        below = poly.real_roots(fac, hi=Fraction(-2))
        inside = poly.real_roots(fac, lo=Fraction(-2), hi=Fraction(2))
        if below:
            return SalemReport(SalemKind.NOT_SALEM, None, "real root below -1")
        if len(above) + len(inside) != len(fac) - 1:
            return SalemReport(SalemKind.NOT_SALEM, None, "roots off the unit circle and off the real line")
        if above:
            big += len(above) * mult
            cand = (fac, above[0])
        circle += 2 * len(inside) * mult
    if big != 1:
        return SalemReport(SalemKind.NOT_SALEM, None, f"{big} root pairs off the unit circle, expected 1")
    fac, root = cand
    c = SalemCandidate(list(f), fac, root)
    if len(fac) == 2:
        return SalemReport(SalemKind.QUADRATIC_VACUOUS, c, "lambda is a quadratic unit", circle)
    return SalemReport(SalemKind.SALEM, c, "", circle)


def salem_candidate(coeffs) -> SalemCandidate:
    rep = is_salem(coeffs)
    if rep.candidate is None:
        raise InputError(f"not a Salem polynomial: {rep.reason}")
    return rep.candidate


# --------------------------------------------------------------------------
# block model


def normalize_angles(angles) -> list[tuple[int, int]]:
    """Validate ``(q, p)`` pairs for the angles ``2 pi q / p``."""
    out = []
    seen = set()
    for q, p in angles:
        q, p = int(q), int(p)
        if p <= 0 or math.gcd(q, p) != 1:
            raise InputError(f"angle {q}/{p} must be given in lowest terms with p > 0")
        r = q % p
        if r == 0:
            raise InputError("angle 0 is not allowed")
        key = (min(r, p - r), p)
        if key in seen:
            raise InputError("angles must be pairwise distinct")
        seen.add(key)
        out.append((q, p))
    return out


def _two_cos_element(q: int, p: int):
    """``(field, 2 cos(2 pi q / p))``."""
    if p == 1:
        return QQ, QQ(2)
    if p == 2:
        return QQ, QQ(-2)
    k, c = cos_field(p)
    if k.is_rational:
        # p in {3, 4, 6}
        y = {3: -1, 4: 0, 6: 1}[p]
        return QQ, two_cos(q, p, QQ, QQ(y))
    return k, two_cos(q, p, k, k.gen)


@dataclass
class BlockModel:
    M: list  # certified real matrix
    char_poly: list  # over k, leading first
    field: NumberField
    angles: list
    salem: SalemCandidate
    direct: bool


def _trace_field(salem: SalemCandidate):
    fac = salem.trace_factor
    if len(fac) == 2:
        return QQ, QQ(-fac[1])
    roots = poly.real_roots(fac)
    idx = len(roots) - 1  # the root > 2 is the largest one
    k = make_field(fac, identity_embedding=idx)
    return k, k.gen


def _rotation(theta: CertifiedReal):
    c, s = theta.cos(), theta.sin()
    return [[c, -s], [s, c]]


def build_block_model(angles, salem: SalemCandidate, d: int) -> BlockModel:
    """The real block matrix, the field k and the reciprocal polynomial over k.

    With ``2 + 2m = d + 1`` the boost block has characteristic polynomial
    ``x^2 - (lambda + 1/lambda) x + 1``; with ``deg(salem) + 2m = d + 1`` the
    Salem polynomial itself is used (its unit-circle roots add rotations).
    """
    angles = normalize_angles(angles)
    m = len(angles)
    n_salem = len(salem.poly) - 1
    if 2 + 2 * m == d + 1:
        direct = False
    elif n_salem + 2 * m == d + 1 and n_salem > 2:
        direct = True
    else:
        raise DimensionMismatch(f"{m} angles do not fit dimension {d} (d must be 2m+1, or deg+2m-1)")
    k = QQ
    pieces = []
    for q, p in angles:
        kp, y = _two_cos_element(q, p)
        k_new, phi_old, phi_new = compositum(k, kp)
        pieces = [phi_old(x) for x in pieces] + [phi_new(y)]
        k = k_new
    if not direct:
        kt, tau = _trace_field(salem)
        k_new, phi_old, phi_t = compositum(k, kt)
        pieces = [phi_old(x) for x in pieces]
        tau = phi_t(tau)
        k = k_new
    p_k = [k.one]
    for y in pieces:
        p_k = poly.mul(p_k, [k.one, -y, k.one])
    if direct:
        p_k = poly.mul(p_k, [k(c) for c in salem.poly])
    else:
        p_k = poly.mul(p_k, [k.one, -tau, k.one])
    # real model
    blocks = [_rotation(2 * CertifiedReal.pi() * Fraction(q, p)) for q, p in angles]
    eta = salem.log_lambda
    blocks.append([[eta.cosh(), eta.sinh()], [eta.sinh(), eta.cosh()]])
    size = 2 * len(blocks)
    M = [[CertifiedReal.exact(0) for _ in range(size)] for _ in range(size)]
    for b, block in enumerate(blocks):
        for i in range(2):
            for j in range(2):
                M[2 * b + i][2 * b + j] = block[i][j]
    return BlockModel(M, p_k, k, angles, salem, direct)


# --------------------------------------------------------------------------
# trace form


def companion(p) -> list:
    """Matrix of multiplication by x on ``k[x]/(p)`` in the basis ``1, x, ..., x^{n-1}``."""
    n = len(p) - 1
    zero, one = p[0] * 0, p[0] * 0 + 1
    C = [[zero] * n for _ in range(n)]
    for i in range(n - 1):
        C[i + 1][i] = one
    for i in range(n):
        C[i][n - 1] = -p[n - i]
    return C


def trace_form(p):
    """``(G, C)`` with ``G_ij = c_{j-i}`` (power sums of the roots) and ``C`` the companion."""
    p = poly.strip(list(p))
    if p[0] != 1:
        raise NotMonic("polynomial is not monic")
    if not poly.is_palindromic(p):
        raise NotReciprocal("polynomial is not reciprocal")
    if len(poly.gcd(p, poly.diff(p))) > 1:
        raise NotSeparable("polynomial has a repeated root")
    n = len(p) - 1
    c = poly.power_sums(p, n)
    G = [[c[abs(j - i)] for j in range(n)] for i in range(n)]
    C = companion(p)
    if not linalg.equal(linalg.congruent(G, C), G):
        raise CertificationError("companion matrix does not preserve the trace form")
    return G, C


def twisted_gram(p, coeffs) -> list:
    """Gram matrix of the form twisted by ``r = a_0 + sum a_j (x^j + x^-j)``."""
    n = len(p) - 1
    span = len(coeffs) - 1
    c = poly.power_sums(p, n + span)

    def s(t):
        return c[abs(t)]

    zero = p[0] * 0
    G = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = s(j - i) * coeffs[0]
            for l in range(1, span + 1):
                if coeffs[l]:
                    acc = acc + (s(j - i + l) + s(j - i - l)) * coeffs[l]
            G[i][j] = acc
    return G


def _twists(n: int, height: int, limit: int):
    """Symmetric twist coefficient vectors in increasing height, identity first."""
    free = max(n // 2 - 1, 0)
    yield (1,) + (0,) * free
    count = 1
    for h in range(1, height + 1):
        rng = range(-h, h + 1)
        for vec in product(rng, repeat=free + 1):
            if max(abs(v) for v in vec) != h:
                continue
            yield vec
            count += 1
            if count >= limit:
                return


def _off_circle_embeddings(p, k: NumberField) -> list[int]:
    """Non-identity embeddings at which ``p`` has roots off the unit circle."""
    bad = []
    try:
        T = poly.to_trace(p)
    except ValueError:
        return [e for e in k.embeddings if e != k.identity_embedding]
    deg = len(T) - 1
    for e in k.embeddings:
        if e == k.identity_embedding:
            continue
        ctx = k.context(e)
        try:
            inside = poly.count_real_roots(T, ctx, Fraction(-2), Fraction(2))
        except ValueError:
            inside = -1
        if inside != deg:
            bad.append(e)
    return bad


@dataclass
class TwistResult:
    form: QuadraticForm
    twist: tuple
    profiles: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"twist": list(self.twist), "tried": len(self.profiles)}


def admissibilize(G, C, k: NumberField, d: int, p=None, height: int = 8, limit: int = 5000) -> TwistResult:
    """First twist (identity first, then by height, then sign) giving an admissible form."""
    n = len(G)
    if n != d + 1:
        raise DimensionMismatch(f"form of size {n} for dimension {d}")
    if not linalg.equal(linalg.congruent(G, C), G):
        raise InputError("C does not preserve G")
    if p is None:
        p = linalg.charpoly(C)
    base = QuadraticForm(k, G)
    rep = check_admissible(base)
    profiles = [((1,), rep.signature_profile)]
    if rep.admissible:
        return TwistResult(base, (1,) + (0,) * max(n // 2 - 1, 0), profiles)
    bad = _off_circle_embeddings(p, k)
    if bad:
        raise NoAdmissibleTwistFound(
            f"p has roots off the unit circle at non-identity embeddings {bad}; "
            "every twist is indefinite there",
            profiles,
        )
    for vec in _twists(n, height, limit):
        coeffs = [k(a) for a in vec]
        for sign in (1, -1):
            Gr = twisted_gram(p, [c * sign for c in coeffs])
            try:
                Q = QuadraticForm(k, Gr)
            except DegenerateForm:
                continue
            rep = check_admissible(Q)
            profiles.append((tuple(a * sign for a in vec), rep.signature_profile))
            if rep.admissible:
                return TwistResult(Q, tuple(a * sign for a in vec), profiles)
    raise NoAdmissibleTwistFound(f"no admissible twist among {len(profiles)} candidates", profiles)


# --------------------------------------------------------------------------
# pipeline


@dataclass
class SalemInstance:
    d: int
    field: NumberField
    form: QuadraticForm
    g: IsometryK
    char_poly: list
    target: ComplexLength
    twist: tuple
    angles: list
    salem_poly: list
    certifications: list = dc_field(default_factory=list)


def _target(salem: SalemCandidate, angles, d: int, direct: bool) -> ComplexLength:
    h = HolonomyClass.from_rational_angles(d, angles)
    if direct:
        # the Salem polynomial's own unit-circle roots add rotation angles
        r, _ = poly.divide_out_root(poly.fractions(salem.poly), Fraction(1))
        r, minus = poly.divide_out_root(r, Fraction(-1))
        T = poly.to_trace(r)
        extra, keys = [], []
        for fac, mult in poly.sqf_list(T):
            for root in poly.real_roots(fac, lo=Fraction(-2), hi=Fraction(2)):
                y = CertifiedReal.exact(-fac[1]) if len(fac) == 2 else root.certified()
                extra += [(y / 2).acos()] * mult
                keys += [algebraic_key(fac, y)] * mult
        extra += [CertifiedReal.pi()] * (minus // 2)
        keys += [(("1", "2"), 0)] * (minus // 2)
        angles_all = h.angles + extra
        keys_all = h.keys + keys
        order = sorted(range(len(angles_all)), key=lambda i: angles_all[i].mid())
        used = 2 * len(angles_all)
        h = HolonomyClass(d, [angles_all[i] for i in order], d - 1 - used, [keys_all[i] for i in order])
    return ComplexLength(salem.log_lambda, h)


def _certify(inst: SalemInstance, tol=Fraction(1, 10**10)) -> list:
    checks = []
    g = inst.g
    exact_form = linalg.equal(linalg.congruent(inst.form.gram, g.matrix), inst.form.gram)
    checks.append(("form_preserved", exact_form, "exact"))
    checks.append(("char_poly", g.char_poly == list(inst.char_poly), "exact"))
    rep = check_admissible(inst.form)
    checks.append(("admissible", rep.admissible, "exact"))
    integral = all(is_algebraic_integer(x) for row in g.matrix for x in row) and all(
        is_algebraic_integer(x) for row in inst.form.gram for x in row
    )
    checks.append(("integral_entries", integral, "exact"))
    cl = complex_length(g)
    checks.append(("length", cl.length.within(inst.target.length, tol), str(tol)))
    hd = holonomy_distance(cl.holonomy, inst.target.holonomy)
    checks.append(("holonomy", hd.sign() == 0, "exact"))
    checks.append(("trivial_count", cl.holonomy.trivial_count == inst.target.holonomy.trivial_count, "exact"))
    failed = [c[0] for c in checks if not c[1]]
    if failed:
        raise CertificationError(f"instance checks failed: {failed}")
    return checks


def construct_arithmetic_loxodromic(salem, angles, d: int) -> SalemInstance:
    """End-to-end construction of ``g`` in ``SO'(q, O_k)`` with the target complex length."""
    if not isinstance(salem, SalemCandidate):
        salem = salem_candidate(salem)
    if d < 3:
        raise InputError("need d >= 3")
    angles = normalize_angles(angles)
    if d % 2 == 0:
        return lift_even_dimension(construct_arithmetic_loxodromic(salem, angles, d - 1))
    model = build_block_model(angles, salem, d)
    k, p = model.field, model.char_poly
    G, C = trace_form(p)
    tw = admissibilize(G, C, k, d, p)
    g = IsometryK(C, tw.form)
    inst = SalemInstance(d, k, tw.form, g, p, _target(salem, angles, d, model.direct), tw.twist,
                         angles, [int(c) for c in salem.poly])
    inst.certifications = _certify(inst)
    return inst


def lift_even_dimension(inst: SalemInstance) -> SalemInstance:
    """Add a leading ``+x_0^2`` to the form and a leading 1 to ``g``."""
    k = inst.field
    form = inst.form.lift()
    g = IsometryK(linalg.block_diag(k, [[k.one]], inst.g.matrix), form)
    h = inst.target.holonomy
    target = ComplexLength(inst.target.length, HolonomyClass(inst.d + 1, h.angles, h.trivial_count + 1, h.keys))
    char_poly = poly.mul([k.one, -k.one], list(inst.char_poly))
    out = SalemInstance(inst.d + 1, k, form, g, char_poly, target, inst.twist, inst.angles, inst.salem_poly)
    out.certifications = _certify(out)
    return out


# --------------------------------------------------------------------------
# angle grids


def angle_grid(d: int, delta) -> list[tuple]:
    """Angle tuples whose holonomy classes form a ``delta``-net for dimension ``d``.

    Uses the angles ``2 pi j / P`` (``P`` odd, so pi itself is avoided) with
    ``2 pi m / P < delta``, ``m = floor((d - 1) / 2)``; a point with ``m``
    coinciding angles is within ``m`` grid steps of a tuple of distinct ones.
    """
    m = (d - 1) // 2
    if m == 0:
        return [()]
    delta = float(delta)
    if delta <= 0:
        raise InputError("delta must be positive")
    P = max(2 * m + 1, int(2 * math.pi * m / delta) + 1)
    if P % 2 == 0:
        P += 1
    while 2 * math.pi * m / P >= delta:
        P += 2
    base = []
    for j in range(1, (P - 1) // 2 + 1):
        g = math.gcd(j, P)
        base.append((j // g, P // g))
    return [tuple(c) for c in combinations(base, m)]
