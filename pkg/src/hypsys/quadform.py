"""Quadratic forms over a totally real field.

Diagonalization is exact (symmetric Gaussian elimination over k); signs of the
diagonal entries at each real embedding then give the signature there.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Optional, Sequence

from . import linalg
from .errors import DegenerateForm, DimensionMismatch, InputError
from .numfield import FieldElement, NumberField, sign_at


class Isotropy(str, Enum):
    ANISOTROPIC = "Anisotropic"
    ISOTROPIC = "Isotropic"
    UNKNOWN = "Unknown"


class QuadraticForm:
    """Symmetric nondegenerate Gram matrix over a number field."""

    def __init__(self, field: NumberField, gram):
        self.field = field
        self.gram = linalg.to_matrix(field, gram)
        self.dim = len(self.gram)
        if any(len(row) != self.dim for row in self.gram):
            raise DimensionMismatch("Gram matrix must be square")
        if not linalg.is_symmetric(self.gram):
            raise InputError("Gram matrix is not symmetric")
        self._diag = None
        self._diag = congruence_diagonalize(self)

    @classmethod
    def diagonal(cls, field: NumberField, entries) -> "QuadraticForm":
        return cls(field, linalg.diag(field, entries))

    @property
    def d(self) -> int:
        """Dimension of the hyperbolic space modelled by this form."""
        return self.dim - 1

    def __call__(self, v) -> FieldElement:
        return linalg.bilinear(self.gram, v, v)

    def pair(self, u, v) -> FieldElement:
        return linalg.bilinear(self.gram, u, v)

    def __eq__(self, other):
        return isinstance(other, QuadraticForm) and self.field == other.field and linalg.equal(self.gram, other.gram)

    def __hash__(self):
        return hash((self.field, self.dim))

    def __repr__(self):
        return f"QuadraticForm(dim={self.dim}, field={self.field!r})"

    def transform(self, T) -> "QuadraticForm":
        """The form ``x -> q(Tx)``, i.e. Gram ``T^t Q T``."""
        return QuadraticForm(self.field, linalg.congruent(self.gram, linalg.to_matrix(self.field, T)))

    def lift(self) -> "QuadraticForm":
        """``x0^2 + q(x1, ..., xn)``."""
        return QuadraticForm(self.field, linalg.block_diag(self.field, [[self.field.one]], self.gram))


def congruence_diagonalize(Q: QuadraticForm, order: Optional[Sequence[int]] = None):
    """Return ``(S, D)`` with ``S^t Q S = diag(D)`` exactly over k.

    ``order`` optionally permutes the variables before elimination (the pivot
    order); ``S`` always refers to the original variables.
    """
    if order is None and Q._diag is not None:
        return Q._diag
    k = Q.field
    n = Q.dim
    perm = list(order) if order is not None else list(range(n))
    if sorted(perm) != list(range(n)):
        raise InputError("order must be a permutation of the variables")
    A = [[Q.gram[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
    S = [[k.one if perm[j] == i else k.zero for j in range(n)] for i in range(n)]
    D = []
    for c in range(n):
        if A[c][c].is_zero():
            r = next((r for r in range(c + 1, n) if not A[r][r].is_zero()), None)
            if r is not None:
                _swap(A, S, c, r)
            else:
                r = next((r for r in range(c + 1, n) if not A[c][r].is_zero()), None)
                if r is None:
                    raise DegenerateForm("form is degenerate")
                # x_c := x_c + x_r makes the pivot 2*A[c][r]
                _add_var(A, S, c, r)
        piv = A[c][c]
        inv = piv.inverse()
        for r in range(c + 1, n):
            f = A[c][r] * inv
            if f.is_zero():
                continue
            # x_r := x_r - f * x_c
            for i in range(n):
                A[i][r] = A[i][r] - f * A[i][c]
            for j in range(n):
                A[r][j] = A[r][j] - f * A[c][j]
            for i in range(n):
                S[i][r] = S[i][r] - f * S[i][c]
        D.append(piv)
    return S, D


def _swap(A, S, c, r):
    A[c], A[r] = A[r], A[c]
    for row in A:
        row[c], row[r] = row[r], row[c]
    for row in S:
        row[c], row[r] = row[r], row[c]


def _add_var(A, S, c, r):
    n = len(A)
    for i in range(n):
        A[i][c] = A[i][c] + A[i][r]
    for j in range(n):
        A[c][j] = A[c][j] + A[r][j]
    for i in range(n):
        S[i][c] = S[i][c] + S[i][r]


def signature_at(Q: QuadraticForm, e: int | None = None, order=None) -> tuple[int, int]:
    """``(positives, negatives)`` at embedding ``e`` (default: identity)."""
    _, D = congruence_diagonalize(Q, order)
    signs = [sign_at(x, e) for x in D]
    return signs.count(1), signs.count(-1)


@dataclass
class AdmissibilityReport:
    admissible: bool
    signature_profile: list
    isotropy: Isotropy
    failure_reason: Optional[str] = None
    identity_embedding: int = 0

    def to_json(self) -> dict:
        return {
            "admissible": self.admissible,
            "signature_profile": [list(s) for s in self.signature_profile],
            "identity_embedding": self.identity_embedding,
            "isotropy": self.isotropy.value,
            "failure_reason": self.failure_reason,
        }


def signature_profile(Q: QuadraticForm) -> list[tuple[int, int]]:
    return [signature_at(Q, e) for e in Q.field.embeddings]


def _admissibility(Q: QuadraticForm, profile) -> Optional[str]:
    n = Q.dim
    ident = Q.field.identity_embedding
    if profile[ident] != (n - 1, 1):
        return f"signature {profile[ident]} at the identity embedding, expected {(n - 1, 1)}"
    for e, sig in enumerate(profile):
        if e != ident and sig != (n, 0):
            return f"not positive definite at embedding {e}: signature {sig}"
    return None


def isotropy_class(Q: QuadraticForm, profile=None) -> Isotropy:
    profile = signature_profile(Q) if profile is None else profile
    if _admissibility(Q, profile) is not None:
        return Isotropy.UNKNOWN
    if not Q.field.is_rational:
        return Isotropy.ANISOTROPIC
    if Q.dim >= 5:
        return Isotropy.ISOTROPIC
    return Isotropy.UNKNOWN


def check_admissible(Q: QuadraticForm) -> AdmissibilityReport:
    profile = signature_profile(Q)
    reason = _admissibility(Q, profile)
    return AdmissibilityReport(
        admissible=reason is None,
        signature_profile=profile,
        isotropy=isotropy_class(Q, profile),
        failure_reason=reason,
        identity_embedding=Q.field.identity_embedding,
    )
