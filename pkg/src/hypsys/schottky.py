"""Classical Schottky groups given by half-space pairings.

Generator ``i`` (numbered from 1) pairs the half-space ``A_{-i}`` with the
closed complement of ``A_{+i}``.  When all ``2m`` half-spaces are pairwise
strongly disjoint the ping-pong lemma shows the generators are free.

Words are tuples of nonzero integers: ``+i`` is generator ``i`` and ``-i`` its
inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .certified import CertifiedReal, _to_fraction, cr_min
from .errors import BoundValidationFailed, InputError, NotDisjoint, NotLoxodromic, PairingFailed, SpacelikeLost
from .hypgeom import HalfSpace, future_vector, plane_relation, rationalize_halfspace, strongly_disjoint
from .isometry import ComplexLength, IsometryK, classify, IsometryKind, complex_length, translation_length, _to_mp
from .numfield import sign_at


@dataclass
class GeneratorDatum:
    g: IsometryK
    A_minus: HalfSpace
    A_plus: HalfSpace

    def conjugate(self, h: IsometryK) -> "GeneratorDatum":
        """The datum ``(h g h^-1, h A_-, h A_+)``."""
        return GeneratorDatum(self.g.conjugate(h), h.apply(self.A_minus), h.apply(self.A_plus))


def verify_pairing(datum: GeneratorDatum) -> bool:
    """Exact test that ``g(A_-)`` is the closed complement of ``A_+``."""
    g = datum.g
    image = g.apply(datum.A_minus.oriented_normal())
    target = [-x for x in datum.A_plus.oriented_normal()]
    # image = c * target with c > 0
    pivot = next((i for i, t in enumerate(target) if not t.is_zero()), None)
    if pivot is None:
        return False
    c = image[pivot] / target[pivot]
    if sign_at(c) <= 0:
        return False
    return all((x - c * t).is_zero() for x, t in zip(image, target))


@dataclass
class SchottkyCertificate:
    data: list
    min_gap: CertifiedReal
    pairwise: list  # PlaneRelation matrix over the half-spaces, None on the diagonal
    labels: list  # signed generator label of each half-space

    @property
    def rank(self) -> int:
        return len(self.data)

    def generator(self, letter: int) -> IsometryK:
        g = self.data[abs(letter) - 1].g
        return g if letter > 0 else g.inverse()


def half_spaces(data: Sequence[GeneratorDatum]):
    out, labels = [], []
    for i, datum in enumerate(data, start=1):
        out += [datum.A_minus, datum.A_plus]
        labels += [-i, i]
    return out, labels


def certify_schottky(data: Sequence[GeneratorDatum]) -> SchottkyCertificate:
    """Check every pairing and pairwise strong disjointness of all half-spaces."""
    data = list(data)
    if not data:
        raise InputError("need at least one generator")
    for i, datum in enumerate(data, start=1):
        if not verify_pairing(datum):
            raise PairingFailed(i)
    spaces, labels = half_spaces(data)
    n = len(spaces)
    pairwise: list = [[None] * n for _ in range(n)]
    gaps = []
    for a in range(n):
        for b in range(a + 1, n):
            ok, dist = strongly_disjoint(spaces[a], spaces[b])
            rel = plane_relation(spaces[a].plane, spaces[b].plane)
            if not ok:
                raise NotDisjoint(labels[a], labels[b], rel.kind.value)
            pairwise[a][b] = pairwise[b][a] = rel
            gaps.append(dist)
    return SchottkyCertificate(data, cr_min(gaps), pairwise, labels)


# --------------------------------------------------------------------------
# cyclic example


def _axis_endpoints(g: IsometryK):
    """Future null eigenvectors ``a+`` (eigenvalue lambda > 1) and ``a-``, numerically."""
    n = g.form.dim
    G = mpmath.matrix([[_to_mp(x) for x in row] for row in g.matrix])
    vals, vecs = mpmath.eig(G)
    reals = [(i, mpmath.re(v)) for i, v in enumerate(vals) if abs(mpmath.im(v)) < mpmath.mpf(10) ** (-mpmath.mp.dps // 2)]
    i_plus = max(reals, key=lambda t: t[1])[0]
    i_minus = min((t for t in reals if t[1] > 0), key=lambda t: t[1])[0]
    Qr = mpmath.matrix([[_to_mp(x) for x in row] for row in g.form.gram])
    e = mpmath.matrix([_to_mp(x) for x in future_vector(g.form)])

    def vec(i):
        v = mpmath.matrix([mpmath.re(vecs[r, i]) for r in range(n)])
        if (e.T * Qr * v)[0] > 0:
            v = -v
        return v

    ap, am = vec(i_plus), vec(i_minus)
    # symmetric normalization: <a+, e> = <a-, e>, <a+, a-> = -1/2
    am = am * ((e.T * Qr * ap)[0] / (e.T * Qr * am)[0])
    c = (ap.T * Qr * am)[0]
    s = mpmath.sqrt(-1 / (2 * c))
    return ap * s, am * s, Qr


def build_cyclic_example(g: IsometryK, max_rounds: int = 8) -> GeneratorDatum:
    """Pairing half-spaces bounded by planes orthogonal to the axis of ``g``.

    The planes cross the axis at parameters ``-l/2`` and ``+l/2`` (with ``l``
    the translation length) measured from the point of the axis closest to
    the reference point of the form, so ``g`` maps one onto the other.
    """
    if classify(g) != IsometryKind.LOXODROMIC:
        raise NotLoxodromic("cyclic example needs a loxodromic isometry")
    ell = translation_length(g)
    lo, _ = ell.interval()
    eps = min(Fraction(1, 64), lo / 64)
    digits = max(40, int(-mpmath.log10(float(eps))) + 30)
    with mpmath.workdps(digits):
        ap, am, _ = _axis_endpoints(g)
        half = _to_mp(ell) / 2
        normal = ap * mpmath.exp(-half) - am * mpmath.exp(half)
        values = [CertifiedReal.exact(_to_fraction(normal[i])) for i in range(g.form.dim)]
    for _ in range(max_rounds):
        try:
            A = rationalize_halfspace(values, eps, form=g.form, side=-1)
        except SpacelikeLost:
            eps /= 16
            continue
        datum = GeneratorDatum(g, A, HalfSpace(A.plane.image(g.matrix), 1))
        if strongly_disjoint(datum.A_minus, datum.A_plus)[0]:
            return datum
        eps /= 16
    raise SpacelikeLost("could not find rational half-spaces for the axis")


# --------------------------------------------------------------------------
# words


def _letter_key(a: int):
    return (abs(a), a < 0)


def _word_key(w):
    return tuple(_letter_key(a) for a in w)


def inverse_word(w) -> tuple:
    return tuple(-a for a in reversed(w))


def is_reduced(w) -> bool:
    return all(a != -b for a, b in zip(w, w[1:]))


def is_cyclically_reduced(w) -> bool:
    return is_reduced(w) and (len(w) < 2 or w[0] != -w[-1])


def canonical_word(w) -> tuple:
    """Least rotation of ``w`` or its inverse under the letter order 1 < -1 < 2 < -2 < ..."""
    w = tuple(w)
    cands = []
    for u in (w, inverse_word(w)):
        cands += [u[i:] + u[:i] for i in range(len(u))]
    return min(cands, key=_word_key)


def is_proper_power(w) -> bool:
    n = len(w)
    return any(n % p == 0 and w == w[:p] * (n // p) for p in range(1, n))


def cyclically_reduced_words(rank: int, max_len: int):
    """All cyclically reduced words of length 1..max_len (depth first)."""
    letters = [a for i in range(1, rank + 1) for a in (i, -i)]

    def extend(w):
        if w and is_cyclically_reduced(w):
            yield w
        if len(w) == max_len:
            return
        for a in letters:
            if w and a == -w[-1]:
                continue
            yield from extend(w + (a,))

    yield from extend(())


@dataclass
class WordLengthRecord:
    word: tuple
    length_word: int
    complex_length: ComplexLength
    primitive: bool

    def to_json(self, digits: int = 30) -> dict:
        return {
            "word": list(self.word),
            "length_word": self.length_word,
            "primitive": self.primitive,
            "complex_length": self.complex_length.to_json(digits),
        }


def word_matrix(cert: SchottkyCertificate, w) -> IsometryK:
    g = None
    for a in w:
        h = cert.generator(a)
        g = h if g is None else g * h
    return g


def enumerate_complex_lengths(cert: SchottkyCertificate, L: int) -> list:
    """One record per cyclically reduced word up to rotation and inversion, ``|w| <= L``."""
    if L < 1:
        raise InputError("L must be at least 1")
    gens = {a: cert.generator(a) for i in range(1, cert.rank + 1) for a in (i, -i)}
    records = []

    def walk(w, g):
        if is_cyclically_reduced(w) and canonical_word(w) == w:
            records.append(WordLengthRecord(w, len(w), complex_length(g), not is_proper_power(w)))
        if len(w) == L:
            return
        for a, h in gens.items():
            if a == -w[-1]:
                continue
            walk(w + (a,), g * h)

    for a, h in gens.items():
        walk((a,), h)
    records.sort(key=lambda r: (r.complex_length.length.mid(), _word_key(r.word)))
    return records


def spectrum_with_cutoff(cert: SchottkyCertificate, L: int):
    """Records up to length ``L`` and, when the cutoff bound applies, the certified systole.

    The bound ``l(w) >= (|w| - 1) * min_gap`` is checked on every enumerated
    word before it is used to rule out longer words.
    """
    if L < 2:
        raise InputError("L must be at least 2")
    records = enumerate_complex_lengths(cert, L)
    gap = cert.min_gap
    violations = [r for r in records if (r.complex_length.length - gap * (r.length_word - 1)).sign() < 0]
    if violations:
        raise BoundValidationFailed(
            f"{len(violations)} words violate the crossing bound", records=records, violations=violations
        )
    current = cr_min([r.complex_length.length for r in records])
    if (gap * (L - 1) - current).sign() > 0:
        return records, current
    return records, None


def find_relation(generators: Sequence[IsometryK], max_len: int = 8) -> Optional[tuple]:
    """A nonempty reduced word of length ``<= max_len`` equal to the identity, if any."""
    gens = {}
    for i, g in enumerate(generators, start=1):
        gens[i] = g
        gens[-i] = g.inverse()

    def walk(w, g):
        if g.is_identity():
            return w
        if len(w) == max_len:
            return None
        for a, h in gens.items():
            if a == -w[-1]:
                continue
            found = walk(w + (a,), g * h)
            if found:
                return found
        return None

    for a, h in gens.items():
        found = walk((a,), h)
        if found:
            return found
    return None
