"""Command line front end.

Every command prints one JSON transcript (``schottky spectrum`` prints one JSON
line per record before it).  Exit status: 0 on success, 1 for bad input, 2
when a certification fails.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import jsonio, linalg
from .errors import HypsysError, InputError
from .hypgeom import (
    RelationKind,
    HalfSpace,
    plane_relation,
    proximity_matrix,
    rationalize_halfspace,
    strongly_disjoint,
)
from .isometry import (
    IsometryKind,
    approximate,
    build_infinite_holonomy_example,
    classify,
    complex_length,
    holonomy,
    holonomy_order,
    translation_length,
)
from .numfield import compositum, make_field, parse_rational
from .quadform import check_admissible, congruence_diagonalize, signature_profile
from .salem import angle_grid, construct_arithmetic_loxodromic, is_salem
from .schottky import certify_schottky, enumerate_complex_lengths, spectrum_with_cutoff


class Session:
    def __init__(self, args):
        self.args = args
        self.command = f"{args.group} {args.action}"
        self.digits = args.prec
        self.inputs = {}
        self.certifications = []

    def read(self, path: str):
        try:
            if path == "-":
                text = sys.stdin.read()
            else:
                with open(path, encoding="utf-8") as fh:
                    text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        obj = jsonio.loads(text, path)
        self.inputs[path] = obj
        if isinstance(obj, dict) and "command" in obj and "results" in obj:
            obj = obj["results"]  # a transcript from an earlier run
        return obj

    def check(self, name: str, passed: bool, tolerance: str = "exact"):
        self.certifications.append({"check": name, "pass": bool(passed), "tolerance": tolerance})

    def transcript(self, results) -> dict:
        params = {k: v for k, v in sorted(vars(self.args).items()) if k not in ("func", "prec") and v is not None}
        return {
            "command": self.command,
            "inputs": jsonio.digest({"files": self.inputs, "params": params}),
            "results": results,
            "certifications": self.certifications,
            "precision": self.digits,
        }


def _poly_arg(text: str) -> list:
    try:
        return [parse_rational(c) for c in text.split(",") if c.strip()]
    except InputError:
        raise
    except Exception as exc:  # pragma: no cover - defensive
        raise InputError(f"bad polynomial {text!r}") from exc


def _angles_arg(text: str | None) -> list:
    if not text:
        return []
    out = []
    for item in text.split(","):
        q = parse_rational(item)
        out.append((q.numerator, q.denominator))
    return out


# --------------------------------------------------------------------------
# field


def cmd_field_make(s: Session):
    k = make_field(_poly_arg(s.args.poly), s.args.embedding)
    roots = [list(k.root_value(e).decimal(s.digits)) for e in k.embeddings]
    return {"field": jsonio.field_to_json(k), "degree": k.degree, "embeddings": roots}


def cmd_field_compositum(s: Session):
    if not s.args.poly or len(s.args.poly) != 2:
        raise InputError("give exactly two --poly arguments")
    k1, k2 = (make_field(_poly_arg(p)) for p in s.args.poly)
    K, phi1, phi2 = compositum(k1, k2)
    ok = all(
        (phi(k.gen).embed() - k.gen.embed()).within(0, Fraction(1, 10 ** s.digits))
        for phi, k in ((phi1, k1), (phi2, k2))
    )
    s.check("generator_images", ok, f"1e-{s.digits}")
    return {
        "field": jsonio.field_to_json(K),
        "images": [jsonio.element_to_json(phi1(k1.gen)), jsonio.element_to_json(phi2(k2.gen))],
    }


# --------------------------------------------------------------------------
# form


def cmd_form_check(s: Session):
    Q = jsonio.form_from_json(s.read(s.args.input))
    rep = check_admissible(Q)
    s.check("admissible", rep.admissible)
    return rep.to_json()


def cmd_form_diag(s: Session):
    Q = jsonio.form_from_json(s.read(s.args.input))
    S, D = congruence_diagonalize(Q)
    exact = linalg.equal(linalg.congruent(Q.gram, S), linalg.diag(Q.field, D))
    s.check("congruence", exact)
    return {
        "S": jsonio.matrix_to_json(S),
        "D": [jsonio.element_to_json(x) for x in D],
        "signature_profile": [list(p) for p in signature_profile(Q)],
    }


# --------------------------------------------------------------------------
# geometry


def cmd_geom_relation(s: Session):
    obj = s.read(s.args.input)
    Q = jsonio.form_from_json(obj["form"])
    if "halfspaces" in obj:
        spaces = [jsonio.halfspace_from_json(Q, h) for h in obj["halfspaces"]]
        planes = [h.plane for h in spaces]
    else:
        spaces = None
        planes = [jsonio.plane_from_json(Q, p) for p in obj.get("planes", [])]
    if len(planes) < 2:
        raise InputError("need at least two planes")
    out = []
    for i in range(len(planes)):
        for j in range(i + 1, len(planes)):
            entry = {"i": i, "j": j, **plane_relation(planes[i], planes[j]).to_json(s.digits)}
            if spaces is not None:
                ok, _ = strongly_disjoint(spaces[i], spaces[j])
                entry["strongly_disjoint"] = ok
            out.append(entry)
    results = {"relations": out}
    if s.args.D is not None:
        prox = proximity_matrix(planes, jsonio.real_from_json(s.args.D))
        results["proximity"] = [[None if p is None else p.to_json(s.digits) for p in row] for row in prox]
    return results


def cmd_geom_rationalize(s: Session):
    obj = s.read(s.args.input)
    Q = jsonio.form_from_json(obj["form"])
    normal = [jsonio.real_from_json(x) for x in obj["normal"]]
    eps = parse_rational(obj.get("eps", s.args.eps or "1/1000000"))
    H = rationalize_halfspace(normal, eps, Q.field, form=Q, side=int(obj.get("side", 1)))
    s.check("spacelike", True)
    return {"halfspace": jsonio.halfspace_to_json(H)}


# --------------------------------------------------------------------------
# isometries


def _load_isometry(s: Session):
    obj = s.read(s.args.input)
    if isinstance(obj, dict) and "isometry" in obj:
        obj = obj["isometry"]
    return jsonio.isometry_from_json(obj)


def cmd_iso_classify(s: Session):
    g = _load_isometry(s)
    s.check("isometry", True)
    s.check("orthochronous", True)
    return {"kind": classify(g).value}


def cmd_iso_length(s: Session):
    g = _load_isometry(s)
    return {"kind": classify(g).value, "length": list(translation_length(g).decimal(s.digits))}


def cmd_iso_holonomy(s: Session):
    g = _load_isometry(s)
    cl = complex_length(g)
    order = holonomy_order(cl.holonomy)
    return {**cl.to_json(s.digits), "order": "Infinite" if order == float("inf") else order}


def cmd_iso_approximate(s: Session):
    obj = s.read(s.args.input)
    Q = jsonio.form_from_json(obj["form"])
    target = [[jsonio.real_from_json(x) for x in row] for row in obj["target"]]
    eps = parse_rational(obj.get("eps", s.args.eps or "1/1000000"))
    g = approximate(target, eps, Q)
    s.check("exact_isometry", True)
    s.check("within_eps", True, jsonio.rational(eps))
    return {"isometry": jsonio.isometry_to_json(g)}


def cmd_iso_infinite_holonomy(s: Session):
    eps = parse_rational(s.args.eps or "1/1000")
    g = build_infinite_holonomy_example(s.args.d, eps)
    cl = complex_length(g)
    s.check("length_below_eps", (cl.length - eps).sign() < 0, jsonio.rational(eps))
    order = holonomy_order(cl.holonomy)
    s.check("infinite_order", order == float("inf"))
    return {
        "isometry": jsonio.isometry_to_json(g),
        "complex_length": cl.to_json(s.digits),
        "order": "Infinite" if order == float("inf") else order,
    }


# --------------------------------------------------------------------------
# schottky


def _certificate(s: Session):
    data = jsonio.schottky_from_json(s.read(s.args.input))
    cert = certify_schottky(data)
    s.check("pairings", True)
    s.check("strongly_disjoint", True)
    return cert


def cmd_schottky_certify(s: Session):
    cert = _certificate(s)
    rel = [[None if r is None else r.to_json(s.digits) for r in row] for row in cert.pairwise]
    return {"rank": cert.rank, "min_gap": list(cert.min_gap.decimal(s.digits)), "labels": cert.labels,
            "pairwise": rel}


def cmd_schottky_spectrum(s: Session):
    cert = _certificate(s)
    records, systole = spectrum_with_cutoff(cert, s.args.L)
    for r in records:
        print(jsonio.dumps(r.to_json(s.digits)))
    s.check("cutoff_bound", True)
    return {
        "records": len(records),
        "min_gap": list(cert.min_gap.decimal(s.digits)),
        "systole": None if systole is None else list(systole.decimal(s.digits)),
        "systole_certified": systole is not None,
    }


# --------------------------------------------------------------------------
# salem


def cmd_salem_check(s: Session):
    rep = is_salem(_poly_arg(s.args.poly))
    return rep.to_json(s.digits)


def instance_to_json(inst, digits: int) -> dict:
    return {
        "d": inst.d,
        "field": jsonio.field_to_json(inst.field),
        "form": jsonio.form_to_json(inst.form),
        "matrix": jsonio.matrix_to_json(inst.g.matrix),
        "char_poly": [jsonio.element_to_json(c) for c in inst.char_poly],
        "salem_poly": inst.salem_poly,
        "angles": [f"{q}/{p}" for q, p in inst.angles],
        "twist": list(inst.twist),
        "target": inst.target.to_json(digits),
        "certifications": [{"check": c[0], "pass": c[1], "tolerance": c[2]} for c in inst.certifications],
    }


def cmd_salem_build(s: Session):
    inst = construct_arithmetic_loxodromic(_poly_arg(s.args.poly), _angles_arg(s.args.angles), s.args.d)
    for name, ok, tol in inst.certifications:
        s.check(name, ok, tol)
    out = instance_to_json(inst, s.digits)
    if s.args.out:
        with open(s.args.out, "w", encoding="utf-8") as fh:
            fh.write(jsonio.dumps(out) + "\n")
    return out


def cmd_salem_grid(s: Session):
    delta = jsonio.real_from_json(s.args.delta)
    grid = angle_grid(s.args.d, float(delta))
    return {"d": s.args.d, "tuples": [[f"{q}/{p}" for q, p in t] for t in grid]}


# --------------------------------------------------------------------------
# examples


def _example_json(name: str) -> dict:
    from .examples import EXAMPLES

    if name not in EXAMPLES:
        raise InputError(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}")
    return EXAMPLES[name]()


def cmd_example_show(s: Session):
    return _example_json(s.args.name)


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypsys", description=__doc__.splitlines()[0])
    parser.add_argument("--prec", type=int, default=30, help="decimal digits for printed intervals")
    groups = parser.add_subparsers(dest="group", required=True)

    def add(group, name, func, aliases=(), **kw):
        p = group.add_parser(name, aliases=list(aliases), **kw)
        p.set_defaults(func=func, action=name)
        p.add_argument("--prec", type=int, default=argparse.SUPPRESS)
        return p

    g = groups.add_parser("field").add_subparsers(dest="action", required=True)
    p = add(g, "make", cmd_field_make)
    p.add_argument("--poly", required=True, help="minimal polynomial, comma separated, constant term last")
    p.add_argument("--embedding", type=int)
    p = add(g, "compositum", cmd_field_compositum)
    p.add_argument("--poly", action="append")

    g = groups.add_parser("form").add_subparsers(dest="action", required=True)
    for name, func in (("check", cmd_form_check), ("diag", cmd_form_diag)):
        add(g, name, func).add_argument("--in", dest="input", required=True)

    g = groups.add_parser("geom").add_subparsers(dest="action", required=True)
    p = add(g, "relation", cmd_geom_relation)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--D", help="proximity threshold")
    p = add(g, "rationalize", cmd_geom_rationalize)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--eps")

    g = groups.add_parser("iso").add_subparsers(dest="action", required=True)
    for name, func in (("classify", cmd_iso_classify), ("length", cmd_iso_length), ("holonomy", cmd_iso_holonomy)):
        add(g, name, func).add_argument("--in", dest="input", required=True)
    p = add(g, "approximate", cmd_iso_approximate)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--eps")
    p = add(g, "infinite-holonomy", cmd_iso_infinite_holonomy, aliases=("example-cor42",))
    p.add_argument("-d", type=int, default=3)
    p.add_argument("--eps")

    g = groups.add_parser("schottky").add_subparsers(dest="action", required=True)
    add(g, "certify", cmd_schottky_certify).add_argument("--in", dest="input", required=True)
    p = add(g, "spectrum", cmd_schottky_spectrum)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("-L", type=int, default=6)

    g = groups.add_parser("salem").add_subparsers(dest="action", required=True)
    add(g, "check", cmd_salem_check).add_argument("--poly", required=True)
    p = add(g, "build", cmd_salem_build)
    p.add_argument("--poly", required=True)
    p.add_argument("--angles", default="", help="comma separated q/p for the angles 2*pi*q/p")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--out")
    p = add(g, "grid", cmd_salem_grid)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--delta", required=True)

    g = groups.add_parser("example").add_subparsers(dest="action", required=True)
    add(g, "show", cmd_example_show).add_argument("name")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    s = Session(args)
    try:
        results = args.func(s)
        if args.group == "example":
            print(jsonio.dumps(results))
            return 0
    except HypsysError as exc:
        out = {"command": s.command, "error": exc.to_json(), "exit_code": exc.exit_code}
        print(jsonio.dumps(out))
        return exc.exit_code
    except (KeyError, TypeError) as exc:
        out = {"command": s.command, "error": {"error": "InputError", "message": f"malformed input: {exc}"},
               "exit_code": 1}
        print(jsonio.dumps(out))
        return 1
    print(jsonio.dumps(s.transcript(results)))
    return 0


def main(argv=None):
    sys.exit(run(argv))
