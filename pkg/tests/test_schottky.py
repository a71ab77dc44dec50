import random
from fractions import Fraction

import mpmath
import pytest

from hypsys import jsonio, linalg
from hypsys.certified import CertifiedReal
from hypsys.errors import BoundValidationFailed, InputError, NotDisjoint, NotLoxodromic, PairingFailed
from hypsys.examples import boost, lorentz_form, overlapping_data, rank_two_data
from hypsys.hypgeom import HalfSpace, HPlane, strongly_disjoint
from hypsys.isometry import IsometryK, build_infinite_holonomy_example, cayley, translation_length
from hypsys.numfield import QQ
from hypsys.schottky import (
    GeneratorDatum,
    SchottkyCertificate,
    build_cyclic_example,
    canonical_word,
    certify_schottky,
    cyclically_reduced_words,
    enumerate_complex_lengths,
    find_relation,
    inverse_word,
    is_proper_power,
    spectrum_with_cutoff,
    verify_pairing,
    word_matrix,
)
from oracles import naive_classes

F = Fraction
TIGHT = F(1, 10**20)
LOG9 = CertifiedReal.exact(9).log()


@pytest.fixture(scope="module")
def rank2():
    return certify_schottky(rank_two_data())


def boost_by_4():
    """Boost along x1 with stretch 4 (cosh = 17/8), translation length log 4."""
    Q = lorentz_form(2)
    return IsometryK([[1, 0, 0], [0, F(17, 8), F(15, 8)], [0, F(15, 8), F(17, 8)]], Q)


def axis_planes():
    # planes orthogonal to the x1-axis at parameters -log 2 and +log 2
    Q = lorentz_form(2)
    return HPlane(Q, [0, F(5, 4), F(-3, 4)]), HPlane(Q, [0, F(5, 4), F(3, 4)])


def test_verify_pairing_examples():
    g = boost_by_4()
    Pm, Pp = axis_planes()
    assert verify_pairing(GeneratorDatum(g, HalfSpace(Pm, -1), HalfSpace(Pp, 1)))
    assert not verify_pairing(GeneratorDatum(g, HalfSpace(Pm, -1), HalfSpace(Pp, -1)))
    ident = IsometryK(linalg.identity(QQ, 3), g.form)
    assert not verify_pairing(GeneratorDatum(ident, HalfSpace(Pm, -1), HalfSpace(Pp, 1)))


def test_certify_rank_one_by_hand():
    g = boost_by_4()
    Pm, Pp = axis_planes()
    cert = certify_schottky([GeneratorDatum(g, HalfSpace(Pm, -1), HalfSpace(Pp, 1))])
    assert cert.rank == 1
    assert cert.min_gap.within(CertifiedReal.exact(4).log(), TIGHT)


def test_pairing_failure_reported():
    g = boost_by_4()
    Pm, Pp = axis_planes()
    with pytest.raises(PairingFailed) as err:
        certify_schottky([GeneratorDatum(g, HalfSpace(Pm, -1), HalfSpace(Pp, -1))])
    assert err.value.exit_code == 2


def test_cyclic_example_boost():
    g = boost(F(1, 3))  # stretch 4
    datum = build_cyclic_example(g)
    cert = certify_schottky([datum])
    ell = translation_length(g)
    # planes one translation length apart (g maps one onto the other)
    assert (cert.min_gap - ell).within(0, F(1, 20))
    assert verify_pairing(datum)


def test_cyclic_example_infinite_holonomy():
    g = build_infinite_holonomy_example(3, F(1, 1000))
    datum = build_cyclic_example(g)
    assert verify_pairing(datum)
    ok, dist = strongly_disjoint(datum.A_minus, datum.A_plus)
    assert ok and dist.sign() > 0
    cert = certify_schottky([datum])
    assert cert.rank == 1


def test_cyclic_example_needs_loxodromic():
    Q = lorentz_form(2)
    rot = IsometryK([[F(3, 5), F(-4, 5), 0], [F(4, 5), F(3, 5), 0], [0, 0, 1]], Q)
    with pytest.raises(NotLoxodromic):
        build_cyclic_example(rot)


def test_rank_two_certifies(rank2):
    assert rank2.rank == 2
    # oracle: every pair of the four half-spaces is ultraparallel with positive distance
    n = len(rank2.labels)
    for a in range(n):
        for b in range(n):
            if a != b:
                assert rank2.pairwise[a][b].distance.sign() > 0
    assert (rank2.min_gap - F(6, 5)).sign() > 0


def test_overlap_not_disjoint():
    with pytest.raises(NotDisjoint) as err:
        certify_schottky(overlapping_data())
    assert err.value.exit_code == 2
    assert {err.value.i, err.value.j} <= {-1, 1, -2, 2}


def test_word_helpers():
    assert inverse_word((1, 2, -1)) == (1, -2, -1)
    assert canonical_word((2, 1)) == (1, 2)
    assert canonical_word((-1,)) == (1,)
    assert canonical_word((-2, -1)) == (1, 2)
    assert is_proper_power((1, 2, 1, 2)) and not is_proper_power((1, 2, 2))
    words = list(cyclically_reduced_words(2, 2))
    # length 1: four letters; length 2: 4 * 3 reduced pairs, all cyclically reduced
    assert len(words) == 4 + 12


def test_rank_one_spectrum():
    g = boost(F(1, 3))
    cert = certify_schottky([build_cyclic_example(g)])
    records = enumerate_complex_lengths(cert, 3)
    assert [r.word for r in records] == [(1,), (1, 1), (1, 1, 1)]
    ell = translation_length(g)
    for n, r in enumerate(records, start=1):
        assert r.complex_length.length.within(n * ell, TIGHT)
    assert [r.primitive for r in records] == [True, False, False]
    _, systole = spectrum_with_cutoff(cert, 3)
    assert systole is not None and systole.within(ell, TIGHT)


def test_rank_two_L2(rank2):
    records = enumerate_complex_lengths(rank2, 2)
    words = sorted(r.word for r in records)
    assert words == [(1,), (1, -2), (1, 1), (1, 2), (2,), (2, 2)]


def test_enumeration_matches_naive(rank2):
    L = 6
    records = enumerate_complex_lengths(rank2, L)
    classes = naive_classes(rank2, L)
    assert len(records) == len(classes)
    by_orbit = {}
    for r in records:
        orbit = next(o for o in classes if r.word in o)
        assert orbit not in by_orbit
        by_orbit[orbit] = r
    rng = random.Random(1)
    for orbit, members in classes.items():
        r = by_orbit[orbit]
        # every member of the class has the same characteristic polynomial as the record's word
        sample = rng.sample(members, min(2, len(members)))
        for w in sample:
            assert word_matrix(rank2, w).char_poly == word_matrix(rank2, r.word).char_poly
    # the records are sorted by length
    lengths = [float(r.complex_length.length) for r in records]
    assert lengths == sorted(lengths)


def test_naive_lengths_for_short_words(rank2):
    # oracle: log of the spectral radius of the word matrix, from mpmath eigenvalues
    records = {r.word: r for r in enumerate_complex_lengths(rank2, 3)}
    for orbit, members in naive_classes(rank2, 3).items():
        w = members[-1]
        M = word_matrix(rank2, w).matrix
        with mpmath.workdps(60):
            G = mpmath.matrix([[mpmath.mpf(x.to_rational().numerator) / x.to_rational().denominator for x in row]
                               for row in M])
            ell = mpmath.log(max(abs(z) for z in mpmath.eig(G)[0]))
            ref = F(mpmath.nstr(ell, 50))
        rec = records[canonical_word(w)]
        assert rec.complex_length.length.within(ref, F(1, 10**40))


def test_cutoff_bound_holds(rank2):
    records = enumerate_complex_lengths(rank2, 6)
    for r in records:
        assert (r.complex_length.length - rank2.min_gap * (r.length_word - 1)).sign() > 0


def test_systole_certification(rank2):
    records, systole = spectrum_with_cutoff(rank2, 2)
    assert systole is None  # min_gap is about 1.22 < log 9
    records, systole = spectrum_with_cutoff(rank2, 3)
    assert systole is not None and systole.within(LOG9, TIGHT)
    # one level deeper agrees
    deeper = enumerate_complex_lengths(rank2, 4)
    assert min(float(r.complex_length.length) for r in deeper) == pytest.approx(float(systole), abs=1e-15)


def test_bound_violation_detected(rank2):
    fake = SchottkyCertificate(rank2.data, CertifiedReal.exact(100), rank2.pairwise, rank2.labels)
    with pytest.raises(BoundValidationFailed) as err:
        spectrum_with_cutoff(fake, 3)
    assert err.value.violations and err.value.records


def test_spectrum_rejects_small_L(rank2):
    with pytest.raises(InputError):
        spectrum_with_cutoff(rank2, 1)


def test_freeness_spot_check(rank2):
    assert find_relation([d.g for d in rank2.data], max_len=8) is None


def test_relation_found_when_not_free():
    g = boost(F(1, 3))
    rel = find_relation([g, g * g], max_len=4)
    assert rel is not None
    gens = {1: g, -1: g.inverse(), 2: g * g, -2: (g * g).inverse()}
    acc = gens[rel[0]]
    for a in rel[1:]:
        acc = acc * gens[a]
    assert acc.is_identity()


def test_conjugated_data_certify(rank2):
    Q = rank2.data[0].g.form
    X = [[0, F(1, 7), F(1, 5)], [F(-1, 7), 0, F(1, 3)], [F(1, 5), F(1, 3), 0]]
    h = cayley(X, Q)
    cert = certify_schottky([d.conjugate(h) for d in rank2.data])
    assert cert.min_gap.within(rank2.min_gap, TIGHT)


def test_json_round_trip(rank2):
    obj = jsonio.schottky_to_json(rank2.data)
    again = certify_schottky(jsonio.schottky_from_json(jsonio.loads(jsonio.dumps(obj))))
    assert again.min_gap.within(rank2.min_gap, TIGHT)
