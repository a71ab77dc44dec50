"""Hyperboloid-model geometry for a form of signature (d, 1).

Hyperbolic space is the sheet of ``q(x) = -1`` selected by a fixed future
reference vector.  Hyperplanes are orthogonal complements of spacelike
normals with entries in k; every combinatorial decision (which side, whether
two planes meet) is made exactly in k, and only distances are real.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .certified import CertifiedReal, as_certified
from .errors import DimensionMismatch, InputError, NotSpacelike, SpacelikeLost, WrongSignature
from .numfield import FieldElement, NumberField, QQ, sign_at
from .quadform import QuadraticForm, congruence_diagonalize, signature_at


# --------------------------------------------------------------------------
# forms over R


def real_gram(Q: QuadraticForm):
    return [[x.embed() for x in row] for row in Q.gram]


def real_pair(Q: QuadraticForm, u, v) -> CertifiedReal:
    """``<u, v>_q`` for vectors of certified reals (or field elements)."""
    G = real_gram(Q)
    u = [as_certified(x) for x in u]
    v = [as_certified(x) for x in v]
    acc = CertifiedReal.exact(0)
    for i, ui in enumerate(u):
        for j, vj in enumerate(v):
            if not (Q.gram[i][j].is_zero()):
                acc = acc + ui * G[i][j] * vj
    return acc


def negative_index(Q: QuadraticForm) -> int:
    """Index of the single negative entry of the diagonalization at the identity."""
    _, D = congruence_diagonalize(Q)
    neg = [i for i, x in enumerate(D) if sign_at(x) < 0]
    if len(neg) != 1:
        raise WrongSignature(f"signature {signature_at(Q)} at the identity embedding, expected {(Q.dim - 1, 1)}")
    return neg[0]


def future_vector(Q: QuadraticForm) -> list[FieldElement]:
    """A timelike vector in k^{d+1} defining the future (upper) sheet."""
    S, _ = congruence_diagonalize(Q)
    j = negative_index(Q)
    return [row[j] for row in S]


def standardize(Q: QuadraticForm):
    """Certified real matrix ``M`` with ``M^t Q M = diag(1, ..., 1, -1)``."""
    S, D = congruence_diagonalize(Q)
    j = negative_index(Q)
    order = [i for i in range(Q.dim) if i != j] + [j]
    scales = [abs(D[i].embed()).sqrt() for i in order]
    return [[S[r][c].embed() / s for c, s in zip(order, scales)] for r in range(Q.dim)]


def is_isometry(g, Q: QuadraticForm) -> bool:
    """Exact test ``g^t Q g = Q`` and ``det g = 1``."""
    g = linalg.to_matrix(Q.field, g)
    if len(g) != Q.dim or any(len(r) != Q.dim for r in g):
        return False
    if not linalg.equal(linalg.congruent(Q.gram, g), Q.gram):
        return False
    return linalg.det(g) == 1


def is_orthochronous(g, Q: QuadraticForm) -> bool:
    """Whether ``g`` preserves the sheets of ``q = -1`` (``g`` an isometry)."""
    # the last entry of M^{-1} g M equals (S^{-1} g S)_{jj}, which lies in k
    g = linalg.to_matrix(Q.field, g)
    S, _ = congruence_diagonalize(Q)
    j = negative_index(Q)
    col = linalg.matvec(g, [row[j] for row in S])
    x = linalg.solve(S, [[c] for c in col])[j][0]
    return sign_at(x) > 0


def is_future(Q: QuadraticForm, v) -> bool:
    """For a timelike k-vector, whether it points into the future cone."""
    return sign_at(Q.pair(future_vector(Q), v)) < 0


# --------------------------------------------------------------------------
# points


class HPoint:
    """Point of hyperbolic space with certified real coordinates."""

    def __init__(self, form: QuadraticForm, coords):
        self.form = form
        self.coords = [as_certified(c) for c in coords]

    @classmethod
    def from_standard(cls, form: QuadraticForm, y) -> "HPoint":
        """Point with standardized coordinates ``y`` (``y`` on the upper sheet of J)."""
        M = standardize(form)
        y = [as_certified(c) for c in y]
        coords = []
        for row in M:
            acc = CertifiedReal.exact(0)
            for m, c in zip(row, y):
                acc = acc + m * c
            coords.append(acc)
        return cls(form, coords)

    def norm(self) -> CertifiedReal:
        return real_pair(self.form, self.coords, self.coords)


def distance(x: HPoint, y: HPoint) -> CertifiedReal:
    return (-real_pair(x.form, x.coords, y.coords)).acosh()


# --------------------------------------------------------------------------
# planes and half-spaces


class HPlane:
    """Hyperplane ``{x : <x, normal>_q = 0}`` with a spacelike normal in k^{d+1}."""

    def __init__(self, form: QuadraticForm, normal):
        self.form = form
        self.normal = [form.field(x) for x in normal]
        if len(self.normal) != form.dim:
            raise DimensionMismatch(f"normal has length {len(self.normal)}, form has dimension {form.dim}")
        self.norm2 = form(self.normal)
        if sign_at(self.norm2) <= 0:
            raise NotSpacelike("normal vector is not spacelike at the identity embedding")

    def image(self, g) -> "HPlane":
        return HPlane(self.form, linalg.matvec(g, self.normal))

    def unit_normal(self):
        n = self.norm2.embed().sqrt()
        return [x.embed() / n for x in self.normal]

    def __eq__(self, other):
        return isinstance(other, HPlane) and _proportional(self.normal, other.normal)

    def __repr__(self):
        return f"HPlane({self.normal!r})"


class HalfSpace:
    """Closed half-space ``{x : side * <x, normal>_q >= 0}``."""

    def __init__(self, plane: HPlane, side: int):
        if side not in (1, -1):
            raise InputError("side must be +1 or -1")
        self.plane = plane
        self.side = side

    @classmethod
    def from_normal(cls, form, normal, side=1) -> "HalfSpace":
        return cls(HPlane(form, normal), side)

    @property
    def form(self):
        return self.plane.form

    @property
    def normal(self):
        return self.plane.normal

    def oriented_normal(self):
        """Normal pointing into the half-space (``side * normal``)."""
        return [x * self.side for x in self.plane.normal]

    def image(self, g) -> "HalfSpace":
        return HalfSpace(self.plane.image(g), self.side)

    def complement(self) -> "HalfSpace":
        return HalfSpace(self.plane, -self.side)

    def contains(self, x: HPoint) -> bool:
        """Certified membership (the point must not lie on the plane)."""
        s = real_pair(self.form, x.coords, self.plane.normal).sign()
        return s * self.side > 0

    def signed_distance(self, x: HPoint) -> CertifiedReal:
        """Distance to the plane, positive inside the half-space."""
        p = real_pair(self.form, x.coords, self.plane.normal) * self.side
        return (p / self.plane.norm2.embed().sqrt()).asinh()

    def __repr__(self):
        return f"HalfSpace(side={self.side:+d}, normal={self.plane.normal!r})"


def _proportional(u, v) -> bool:
    n = len(u)
    return all((u[i] * v[j] - u[j] * v[i]).is_zero() for i in range(n) for j in range(i + 1, n))


class RelationKind(str, Enum):
    INTERSECTING = "Intersecting"
    ASYMPTOTIC = "Asymptotic"
    ULTRAPARALLEL = "Ultraparallel"
    COINCIDENT = "Coincident"


@dataclass
class PlaneRelation:
    kind: RelationKind
    distance: Optional[CertifiedReal] = None

    def to_json(self, digits: int = 30) -> dict:
        out = {"kind": self.kind.value}
        if self.distance is not None:
            out["distance"] = list(self.distance.decimal(digits))
        return out


def _check_same_form(a, b):
    if a.form is not b.form and a.form != b.form:
        raise InputError("objects are defined with respect to different forms")


def plane_relation(P1: HPlane, P2: HPlane) -> PlaneRelation:
    """Intersecting, asymptotic, ultraparallel (with distance) or coincident."""
    _check_same_form(P1, P2)
    Q = P1.form
    ip = Q.pair(P1.normal, P2.normal)
    gap = ip * ip - P1.norm2 * P2.norm2
    s = sign_at(gap)
    if s < 0:
        return PlaneRelation(RelationKind.INTERSECTING)
    if s == 0:
        if _proportional(P1.normal, P2.normal):
            return PlaneRelation(RelationKind.COINCIDENT)
        return PlaneRelation(RelationKind.ASYMPTOTIC)
    cosh = abs(ip.embed()) / (P1.norm2 * P2.norm2).embed().sqrt()
    return PlaneRelation(RelationKind.ULTRAPARALLEL, cosh.acosh())


def _side_sign(H: HalfSpace, other: HPlane, ip: FieldElement) -> int:
    """Sign of ``H.side * <x, H.normal>`` for ``x`` in the (ultraparallel) plane ``other``."""
    Q = H.form
    # u is the timelike vector in span(v_H, v_other) orthogonal to v_other
    u = [a * other.norm2 - b * ip for a, b in zip(H.normal, other.normal)]
    tau = -sign_at(Q.pair(future_vector(Q), u))
    # <u, v_H> = q(v_H) q(v_other) - ip^2 < 0
    return H.side * (-tau)


def strongly_disjoint(H1: HalfSpace, H2: HalfSpace):
    """``(True, distance)`` when the closures of H1 and H2 are disjoint, else ``(False, None)``."""
    _check_same_form(H1, H2)
    rel = plane_relation(H1.plane, H2.plane)
    if rel.kind != RelationKind.ULTRAPARALLEL:
        return False, None
    ip = H1.form.pair(H1.normal, H2.normal)
    if _side_sign(H1, H2.plane, ip) >= 0 or _side_sign(H2, H1.plane, ip) >= 0:
        return False, None
    return True, rel.distance


@dataclass
class Proximity:
    distance: CertifiedReal
    below: bool
    kind: RelationKind

    def to_json(self, digits: int = 30) -> dict:
        return {"kind": self.kind.value, "distance": list(self.distance.decimal(digits)), "below": self.below}


def proximity_matrix(planes: Sequence[HPlane], D) -> list[list[Optional[Proximity]]]:
    """Pairwise distances with the flag ``distance <= D`` (certified)."""
    if len(planes) < 2:
        raise InputError("need at least two planes")
    D = as_certified(D)
    n = len(planes)
    out: list[list[Optional[Proximity]]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rel = plane_relation(planes[i], planes[j])
            if rel.kind == RelationKind.ULTRAPARALLEL:
                dist = rel.distance
                below = (dist - D).sign() <= 0
            else:
                dist = CertifiedReal.exact(0)
                below = True
            out[i][j] = out[j][i] = Proximity(dist, below, rel.kind)
    return out


# --------------------------------------------------------------------------
# rationalization


def _round(value: CertifiedReal, tol: Fraction) -> Fraction:
    """A simple rational within ``tol`` of ``value`` (continued-fraction rounding)."""
    lo, hi = value.enclose_fractions(tol / 8)
    mid = (lo + hi) / 2
    den = 1
    while True:
        q = mid.limit_denominator(den)
        if abs(q - mid) < tol / 2:
            return q
        den *= 4


def rationalize_halfspace(normal, eps, k: NumberField = QQ, form: QuadraticForm | None = None,
                          side: int = 1, retries: int = 6) -> HalfSpace:
    """Half-space whose normal has entries in k and lies within ``eps`` of ``normal``.

    ``normal`` is unit-normalized first; rounding uses rational coordinates.
    """
    if form is None:
        raise InputError("a form is required")
    if all(isinstance(x, FieldElement) for x in normal):
        return HalfSpace(HPlane(form, normal), side)
    eps = Fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    vec = [as_certified(x) for x in normal]
    n2 = real_pair(form, vec, vec)
    if n2.sign() <= 0:
        raise NotSpacelike("input normal is not spacelike")
    norm = n2.sqrt()
    unit = [x / norm for x in vec]
    tol = eps
    for _ in range(retries):
        rounded = [form.field(_round(x, tol)) for x in unit]
        if sign_at(form(rounded)) > 0:
            return HalfSpace(HPlane(form, rounded), side)
        tol /= 16
    raise SpacelikeLost("rounded normal is no longer spacelike")
