"""Ready-made inputs for the command line and the tests."""

from __future__ import annotations

from fractions import Fraction

from . import jsonio
from .hypgeom import HalfSpace, HPlane
from .isometry import cayley
from .numfield import QQ, make_field
from .quadform import QuadraticForm
from .schottky import GeneratorDatum, build_cyclic_example


def sqrt2_field():
    return make_field([1, 0, -2])


def sqrt2_form(d: int) -> QuadraticForm:
    """``x0^2 + ... + x_{d-1}^2 - sqrt(2) x_d^2`` over Q(sqrt 2)."""
    k = sqrt2_field()
    return QuadraticForm.diagonal(k, [k.one] * d + [-k.gen])


def lorentz_form(d: int) -> QuadraticForm:
    return QuadraticForm.diagonal(QQ, [1] * d + [-1])


def boost(s: Fraction, d: int = 2) -> "IsometryK":
    """Boost along the first axis of the standard Lorentz form, via Cayley of ``s * (E_0d + E_d0)``."""
    Q = lorentz_form(d)
    n = d + 1
    X = [[Fraction(0)] * n for _ in range(n)]
    X[0][d] = X[d][0] = Fraction(s)
    return cayley(X, Q)


def rank_two_data():
    """Two boosts of H^2 with ultraparallel axes (stretch 9 each, axes rotated apart)."""
    a = boost(Fraction(4, 5))
    Q = a.form
    X = [[Fraction(0)] * 3 for _ in range(3)]
    X[1][2] = X[2][1] = Fraction(2, 3)
    h = cayley(X, Q)
    da = build_cyclic_example(a)
    return [da, da.conjugate(h)]


def overlapping_data():
    """Two generators whose half-spaces intersect, so certification fails."""
    a = boost(Fraction(4, 5))
    da = build_cyclic_example(a)
    Q = a.form
    X = [[Fraction(0)] * 3 for _ in range(3)]
    X[0][1] = Fraction(1, 10)
    X[1][0] = Fraction(-1, 10)
    r = cayley(X, Q)
    return [da, da.conjugate(r)]


def _planes_example():
    Q = lorentz_form(3)
    k = Q.field
    P1 = HPlane(Q, [k(1), k(0), k(0), k(0)])
    P3 = HPlane(Q, [k(Fraction(5, 4)), k(0), k(0), k(Fraction(3, 4))])
    P2 = HPlane(Q, [k(0), k(1), k(0), k(0)])
    return {
        "form": jsonio.form_to_json(Q),
        "halfspaces": [
            jsonio.halfspace_to_json(HalfSpace(P1, -1)),
            jsonio.halfspace_to_json(HalfSpace(P3, 1)),
            jsonio.halfspace_to_json(HalfSpace(P2, 1)),
        ],
    }


EXAMPLES = {
    "admissible-form": lambda: jsonio.form_to_json(sqrt2_form(3)),
    "isotropic-form": lambda: jsonio.form_to_json(lorentz_form(4)),
    "planes": _planes_example,
    "boost": lambda: jsonio.isometry_to_json(boost(Fraction(1, 3))),
    "schottky-rank2": lambda: jsonio.schottky_to_json(rank_two_data()),
    "schottky-overlap": lambda: jsonio.schottky_to_json(overlapping_data()),
}
