"""Dense exact matrices over a number field (lists of rows of FieldElement)."""

from __future__ import annotations

from .errors import DimensionMismatch, Singular
from .numfield import FieldElement, NumberField


def to_matrix(k: NumberField, rows) -> list[list[FieldElement]]:
    return [[k(x) for x in row] for row in rows]


def identity(k: NumberField, n: int) -> list[list[FieldElement]]:
    return [[k.one if i == j else k.zero for j in range(n)] for i in range(n)]


def zeros(k: NumberField, n: int, m: int | None = None) -> list[list[FieldElement]]:
    return [[k.zero] * (n if m is None else m) for _ in range(n)]


def diag(k: NumberField, entries) -> list[list[FieldElement]]:
    entries = [k(x) for x in entries]
    n = len(entries)
    return [[entries[i] if i == j else k.zero for j in range(n)] for i in range(n)]


def block_diag(k: NumberField, *blocks) -> list[list[FieldElement]]:
    n = sum(len(b) for b in blocks)
    out = zeros(k, n)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = k(x)
        off += len(b)
    return out


def transpose(A):
    return [list(col) for col in zip(*A)]


def _dot(row, col, zero):
    acc = zero
    for a, b in zip(row, col):
        if a and b:
            acc = acc + a * b
    return acc


def matmul(A, B):
    if len(A[0]) != len(B):
        raise DimensionMismatch(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x{len(B[0])}")
    zero = A[0][0] * 0
    Bt = transpose(B)
    return [[_dot(row, col, zero) for col in Bt] for row in A]


def matvec(A, v):
    zero = A[0][0] * 0
    return [_dot(row, v, zero) for row in A]


def add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(A, c):
    return [[a * c for a in row] for row in A]


def bilinear(Q, u, v):
    """``u^t Q v``."""
    return _dot(u, matvec(Q, v), u[0] * 0)


def congruent(Q, g):
    """``g^t Q g``."""
    return matmul(transpose(g), matmul(Q, g))


def is_zero(A) -> bool:
    return all(x.is_zero() for row in A for x in row)


def equal(A, B) -> bool:
    return len(A) == len(B) and all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def is_identity(A) -> bool:
    return all((x == 1) if i == j else x.is_zero() for i, row in enumerate(A) for j, x in enumerate(row))


def is_symmetric(A) -> bool:
    n = len(A)
    return all(A[i][j] == A[j][i] for i in range(n) for j in range(i + 1, n))


def _eliminate(A, B=None):
    """Gauss-Jordan on ``A`` (square), applying the same row operations to ``B``.

    Returns ``(det, X)`` where ``X = A^{-1} B`` (or ``None`` if ``B`` is None).
    Raises Singular when ``A`` is not invertible.
    """
    n = len(A)
    M = [list(r) for r in A]
    R = [list(r) for r in B] if B is not None else None
    one = M[0][0] * 0 + 1
    det = one
    for c in range(n):
        p = next((r for r in range(c, n) if not M[r][c].is_zero()), None)
        if p is None:
            raise Singular("matrix is singular")
        if p != c:
            M[c], M[p] = M[p], M[c]
            if R is not None:
                R[c], R[p] = R[p], R[c]
            det = -det
        piv = M[c][c]
        det = det * piv
        inv = piv.inverse()
        M[c] = [x * inv for x in M[c]]
        if R is not None:
            R[c] = [x * inv for x in R[c]]
        for r in range(n):
            if r != c and not M[r][c].is_zero():
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
                if R is not None:
                    R[r] = [a - f * b for a, b in zip(R[r], R[c])]
    return det, R


def det(A):
    try:
        return _eliminate(A)[0]
    except Singular:
        return A[0][0] * 0


def inverse(A):
    k = A[0][0].field
    return _eliminate(A, identity(k, len(A)))[1]


def solve(A, B):
    return _eliminate(A, B)[1]


def power(A, n: int):
    k = A[0][0].field
    if n < 0:
        return power(inverse(A), -n)
    result = identity(k, len(A))
    base = A
    while n:
        if n & 1:
            result = matmul(result, base)
        n >>= 1
        if n:
            base = matmul(base, base)
    return result


def charpoly(A) -> list:
    """Monic characteristic polynomial (leading coefficient first), Faddeev-LeVerrier."""
    n = len(A)
    k = A[0][0].field
    coeffs = [k.one]
    M = zeros(k, n)
    for i in range(1, n + 1):
        c_prev = coeffs[-1]
        M = matmul(A, M)
        for j in range(n):
            M[j][j] = M[j][j] + c_prev
        AM = matmul(A, M)
        tr = AM[0][0] * 0
        for j in range(n):
            tr = tr + AM[j][j]
        coeffs.append(-tr / i)
    return coeffs
