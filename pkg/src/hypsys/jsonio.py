"""JSON encoding of fields, elements, forms, planes, isometries and Schottky data.

Rationals are strings ``"p/q"``; polynomials are coefficient lists with the
leading coefficient first; field elements are ``{"coeffs": [...]}`` in the
power basis (constant term first).
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .certified import CertifiedReal, _to_fraction
from .errors import InputError
from .hypgeom import HalfSpace, HPlane
from .isometry import ComplexLength, IsometryK
from .numfield import FieldElement, NumberField, make_field, parse_rational
from .quadform import QuadraticForm
from .schottky import GeneratorDatum


def rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def poly_to_json(f) -> list:
    return [rational(c) for c in f]


def field_to_json(k: NumberField) -> dict:
    return {"min_poly": poly_to_json(k.min_poly), "identity_embedding": k.identity_embedding}


def field_from_json(obj) -> NumberField:
    try:
        return make_field([parse_rational(c) for c in obj["min_poly"]], obj.get("identity_embedding"))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed field: {exc}") from exc


def element_to_json(x: FieldElement) -> dict:
    return {"coeffs": [rational(c) for c in x.coeffs]}


def element_from_json(k: NumberField, obj) -> FieldElement:
    if isinstance(obj, dict):
        if "coeffs" not in obj:
            raise InputError("field element needs 'coeffs'")
        return k([parse_rational(c) for c in obj["coeffs"]])
    return k(parse_rational(obj) if isinstance(obj, str) else obj)


def matrix_to_json(A) -> list:
    return [[element_to_json(x) for x in row] for row in A]


def matrix_from_json(k: NumberField, rows) -> list:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError("matrix must be a list of rows")
    return [[element_from_json(k, x) for x in row] for row in rows]


def form_to_json(Q: QuadraticForm) -> dict:
    return {"field": field_to_json(Q.field), "gram": matrix_to_json(Q.gram)}


def form_from_json(obj) -> QuadraticForm:
    if not isinstance(obj, dict) or "gram" not in obj:
        raise InputError("form needs 'field' and 'gram'")
    k = field_from_json(obj["field"]) if "field" in obj else make_field([1, 0])
    return QuadraticForm(k, matrix_from_json(k, obj["gram"]))


def plane_to_json(P: HPlane) -> dict:
    return {"normal": [element_to_json(x) for x in P.normal]}


def plane_from_json(Q: QuadraticForm, obj) -> HPlane:
    return HPlane(Q, [element_from_json(Q.field, x) for x in obj["normal"]])


def halfspace_to_json(H: HalfSpace) -> dict:
    out = plane_to_json(H.plane)
    out["side"] = H.side
    return out


def halfspace_from_json(Q: QuadraticForm, obj) -> HalfSpace:
    if "side" not in obj:
        raise InputError("half-space needs 'side'")
    return HalfSpace(plane_from_json(Q, obj), int(obj["side"]))


def isometry_to_json(g: IsometryK) -> dict:
    return {"form": form_to_json(g.form), "matrix": matrix_to_json(g.matrix)}


def isometry_from_json(obj, form: QuadraticForm | None = None) -> IsometryK:
    if "matrix" not in obj:
        raise InputError("isometry needs 'matrix'")
    if "form" in obj:
        form = form_from_json(obj["form"])
    if form is None:
        raise InputError("isometry needs 'form'")
    return IsometryK(matrix_from_json(form.field, obj["matrix"]), form)


def schottky_to_json(data) -> dict:
    return {
        "data": [
            {"g": isometry_to_json(d.g), "A_minus": halfspace_to_json(d.A_minus), "A_plus": halfspace_to_json(d.A_plus)}
            for d in data
        ]
    }


def schottky_from_json(obj) -> list:
    if not isinstance(obj, dict) or "data" not in obj:
        raise InputError("Schottky instance needs 'data'")
    shared = form_from_json(obj["form"]) if "form" in obj else None
    out = []
    for entry in obj["data"]:
        g = isometry_from_json(entry["g"], shared)
        if shared is None:
            shared = g.form
        elif g.form != shared:
            raise InputError("all generators must preserve the same form")
        g.form = shared
        out.append(GeneratorDatum(g, halfspace_from_json(shared, entry["A_minus"]),
                                  halfspace_from_json(shared, entry["A_plus"])))
    return out


def real_from_json(value) -> CertifiedReal:
    """A real given as a rational/decimal string or a number (taken exactly)."""
    if isinstance(value, bool):
        raise InputError("expected a number")
    try:
        return CertifiedReal.exact(_to_fraction(value))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a real number: {value!r}") from exc


def interval_json(x: CertifiedReal, digits: int) -> list:
    return list(x.decimal(digits))


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def loads(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)
