"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
1 for bad input, 2 for a certification that could not be completed.
"""


class HypsysError(Exception):
    exit_code = 1

    def to_json(self) -> dict:
        return {"error": type(self).__name__, "message": str(self)}


class InputError(HypsysError, ValueError):
    exit_code = 1


class CertificationError(HypsysError):
    exit_code = 2


class PrecisionExhausted(CertificationError, ArithmeticError):
    """An interval computation hit the precision ceiling without deciding."""


# numfield
class NotIrreducible(InputError):
    pass


class NotTotallyReal(InputError):
    pass


class FieldMismatch(InputError):
    pass


class PrimitiveElementSearchExceeded(CertificationError):
    pass


# quadform
class DegenerateForm(InputError):
    pass


# hypgeom
class WrongSignature(InputError):
    pass


class NotSpacelike(InputError):
    pass


class SpacelikeLost(CertificationError):
    pass


# isometry
class NotIsometry(InputError):
    pass


class NotOrthochronous(InputError):
    pass


class NotLoxodromic(InputError):
    pass


class Singular(InputError, ZeroDivisionError):
    pass


class DimensionMismatch(InputError):
    pass


class CayleyChartMiss(CertificationError):
    pass


# schottky
class NotDisjoint(CertificationError):
    def __init__(self, i, j, detail=""):
        self.i, self.j = i, j
        super().__init__(f"NotDisjoint({i},{j}){': ' + detail if detail else ''}")

    def to_json(self):
        return {"error": "NotDisjoint", "i": self.i, "j": self.j, "message": str(self)}


class PairingFailed(CertificationError):
    def __init__(self, i):
        self.i = i
        super().__init__(f"PairingFailed({i})")

    def to_json(self):
        return {"error": "PairingFailed", "i": self.i, "message": str(self)}


class BoundValidationFailed(CertificationError):
    def __init__(self, message, records=(), violations=()):
        self.records = list(records)
        self.violations = list(violations)
        super().__init__(message)


# salem
class NotMonic(InputError):
    pass


class NotIntegerCoefficients(InputError):
    pass


class NotSeparable(InputError):
    pass


class NotReciprocal(InputError):
    pass


class NoAdmissibleTwistFound(CertificationError):
    def __init__(self, message, profiles=()):
        self.profiles = list(profiles)
        super().__init__(message)

    def to_json(self):
        return {"error": "NoAdmissibleTwistFound", "message": str(self),
                "profiles_seen": [list(map(list, p)) for p in self.profiles[:16]]}
