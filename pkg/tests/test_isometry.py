import math
import random
from itertools import permutations
from fractions import Fraction

import mpmath
import pytest

from oracles import mp_roots

from hypsys import linalg
from hypsys.certified import CertifiedReal
from hypsys.errors import CayleyChartMiss, DimensionMismatch, NotIsometry, NotLoxodromic, NotOrthochronous, Singular
from hypsys.isometry import (
    HolonomyClass,
    IsometryK,
    IsometryKind,
    approximate,
    build_infinite_holonomy_example,
    cayley,
    classify,
    complex_length,
    holonomy,
    holonomy_distance,
    holonomy_order,
    inverse_cayley,
    is_skew,
    skew_basis,
    translation_length,
)
from hypsys.numfield import QQ, make_field
from hypsys.quadform import QuadraticForm

F = Fraction
K2 = make_field([1, 0, -2])
K3 = make_field([1, 0, -3])
A = K2.gen
PI = CertifiedReal.pi()
LOG2 = CertifiedReal.exact(2).log()
TIGHT = F(1, 10**20)


def J(d, k=QQ):
    return QuadraticForm.diagonal(k, [1] * d + [-1])


def boost(d=3, c=F(5, 4), s=F(3, 4), k=QQ):
    M = linalg.identity(k, d + 1)
    M[d - 1][d - 1], M[d - 1][d], M[d][d - 1], M[d][d] = k(c), k(s), k(s), k(c)
    return IsometryK(M, J(d, k))


def rotation_120_boost():
    """R(2 pi/3) over Q(sqrt 3) in the first plane, boost with cosh 5/4 in the last."""
    r3 = K3.gen
    M = linalg.identity(K3, 4)
    M[0][0], M[0][1], M[1][0], M[1][1] = K3(F(-1, 2)), -r3 / 2, r3 / 2, K3(F(-1, 2))
    M[2][2], M[2][3], M[3][2], M[3][3] = K3(F(5, 4)), K3(F(3, 4)), K3(F(3, 4)), K3(F(5, 4))
    return IsometryK(M, J(3, K3))


def test_construction_checks():
    with pytest.raises(NotIsometry):
        IsometryK(linalg.diag(QQ, [2, 1, 1, 1]), J(3))
    with pytest.raises(NotOrthochronous):
        IsometryK(linalg.diag(QQ, [1, 1, -1, -1]), J(3))


def test_classify_examples():
    assert classify(IsometryK(linalg.identity(QQ, 4), J(3))) == IsometryKind.IDENTITY
    assert classify(boost()) == IsometryKind.LOXODROMIC
    r3 = K3.gen
    M = linalg.identity(K3, 4)
    M[0][0], M[0][1], M[1][0], M[1][1] = K3(F(-1, 2)), -r3 / 2, r3 / 2, K3(F(-1, 2))
    assert classify(IsometryK(M, J(3, K3))) == IsometryKind.ELLIPTIC
    # parabolic fixing a point at infinity of H^2
    t = F(1)
    P = [[1, -t, t], [t, 1 - t * t / 2, t * t / 2], [t, -t * t / 2, 1 + t * t / 2]]
    assert classify(IsometryK(P, J(2))) == IsometryKind.PARABOLIC


def test_translation_length_examples():
    g = boost()
    assert translation_length(g).within(LOG2, TIGHT)
    assert translation_length(g * g).within(2 * LOG2, TIGHT)
    with pytest.raises(NotLoxodromic):
        translation_length(IsometryK(linalg.identity(QQ, 4), J(3)))


def test_holonomy_pure_boost():
    h = holonomy(boost(d=4))
    assert h.angles == [] and h.trivial_count == 3
    assert holonomy_order(h) == 1


def test_holonomy_rotation_120():
    cl = complex_length(rotation_120_boost())
    assert len(cl.holonomy.angles) == 1
    assert cl.holonomy.angles[0].within(2 * PI / 3, TIGHT)
    assert cl.holonomy.trivial_count == 0
    assert cl.length.within(LOG2, TIGHT)
    assert holonomy_order(cl.holonomy) == 3
    # oracle: char poly has the primitive cube roots of unity as roots
    roots = mp_roots([c.embed().mid() for c in rotation_120_boost().char_poly])
    assert sum(1 for z in roots if abs(z ** 3 - 1) < 1e-30 and abs(z - 1) > 0.5) == 2


@pytest.mark.parametrize("d,eps,trivial", [(3, F(1, 1000), 0), (4, F(1, 100), 1), (5, F(1, 1000), 2)])
def test_infinite_holonomy_example(d, eps, trivial):
    g = build_infinite_holonomy_example(d, eps)
    assert linalg.equal(linalg.congruent(g.form.gram, g.matrix), g.form.gram)
    cl = complex_length(g)
    assert (cl.length - eps).sign() < 0
    assert len(cl.holonomy.angles) == 1 and cl.holonomy.trivial_count == trivial
    assert cl.holonomy.angles[0].within(CertifiedReal.exact(F(3, 5)).acos(), TIGHT)
    assert holonomy_order(cl.holonomy) == math.inf


def test_holonomy_distance_examples():
    h = HolonomyClass.from_rational_angles(3, [(1, 4)])
    assert holonomy_distance(h, h).sign() == 0
    h2 = HolonomyClass.from_rational_angles(3, [(1, 6)])
    assert holonomy_distance(h, h2).within(PI / 6, TIGHT)
    a = HolonomyClass.from_rational_angles(5, [(1, 4)])
    b = HolonomyClass.from_rational_angles(5, [(1, 4), (3, 4)])
    assert holonomy_distance(a, b).within(PI / 2, TIGHT)
    with pytest.raises(DimensionMismatch):
        holonomy_distance(h, a)


def test_holonomy_order_examples():
    assert holonomy_order(HolonomyClass.from_rational_angles(3, [(1, 3)])) == 3
    assert holonomy_order(HolonomyClass.from_rational_angles(3, [])) == 1
    assert holonomy_order(HolonomyClass.from_rational_angles(5, [(1, 4), (1, 3)])) == 12
    assert holonomy_order(HolonomyClass.from_rational_angles(3, [(1, 2)])) == 2
    # eigenvalue (3 + 4i)/5 via the 3-4-5 rotation
    M = linalg.identity(QQ, 4)
    M[0][0], M[0][1], M[1][0], M[1][1] = QQ(F(3, 5)), QQ(F(-4, 5)), QQ(F(4, 5)), QQ(F(3, 5))
    g = IsometryK(M, J(3)) * boost()
    assert holonomy_order(holonomy(g)) == math.inf


def test_holonomy_distance_pseudometric():
    rng = random.Random(8)
    d = 7

    def rand_class():
        ps = [5, 7, 8, 9, 12]
        chosen = set()
        for _ in range(rng.randint(0, 3)):
            p = rng.choice(ps)
            q = rng.randint(1, p // 2)
            if math.gcd(q, p) == 1:
                chosen.add((q, p))
        return HolonomyClass.from_rational_angles(d, sorted(chosen))

    for _ in range(100):
        a, b, c = rand_class(), rand_class(), rand_class()
        ab, ba = holonomy_distance(a, b), holonomy_distance(b, a)
        assert ab.within(ba, F(1, 10**30))
        ac, bc = holonomy_distance(a, c), holonomy_distance(b, c)
        # ab + bc - ac may be exactly zero, so only its upper bound is tested
        _, hi = (ab + bc - ac).enclose_fractions(F(1, 10**30))
        assert hi >= 0


def test_holonomy_distance_matches_brute_force():
    # oracle: min over all matchings of the max difference, computed in floats
    rng = random.Random(9)
    for _ in range(20):
        fa = [(rng.randint(1, 5), 11) for _ in range(3)]
        fb = [(rng.randint(1, 6), 13) for _ in range(3)]
        fa, fb = sorted(set(fa)), sorted(set(fb))
        a = HolonomyClass.from_rational_angles(7, fa)
        b = HolonomyClass.from_rational_angles(7, fb)
        pa = [2 * math.pi * q / p for q, p in fa] + [0.0] * (3 - len(fa))
        pb = [2 * math.pi * q / p for q, p in fb] + [0.0] * (3 - len(fb))
        ref = min(max(abs(x - pb[j]) for x, j in zip(pa, perm)) for perm in permutations(range(3)))
        assert abs(float(holonomy_distance(a, b)) - ref) < 1e-12


def test_skew_basis_examples():
    basis = skew_basis(QuadraticForm.diagonal(QQ, [1, -1]))
    assert len(basis) == 1 and linalg.equal(basis[0], linalg.to_matrix(QQ, [[0, 1], [1, 0]]))
    assert len(skew_basis(QuadraticForm.diagonal(QQ, [1, 1, 1]))) == 3
    Q = QuadraticForm.diagonal(K2, [1, -A])
    (X,) = skew_basis(Q)
    # proportional to [[0, sqrt2], [1, 0]]
    assert (X[0][1] * 1 - X[1][0] * A).is_zero() and is_skew(X, Q)
    for d in (3, 4, 5):
        Q = QuadraticForm.diagonal(K2, [1] * d + [-A])
        basis = skew_basis(Q)
        assert len(basis) == (d + 1) * d // 2
        assert all(is_skew(X, Q) for X in basis)


def test_cayley_examples():
    Q = QuadraticForm.diagonal(K2, [1, -A])
    assert cayley(linalg.zeros(K2, 2), Q).is_identity()
    X = [[0, A / 10], [F(1, 10), 0]]
    T = cayley(X, Q)
    with mpmath.workdps(50):
        mu = mpmath.mpf(2) ** mpmath.mpf(0.25) / 10
        ref = mpmath.log((1 + mu) / (1 - mu))
        assert translation_length(T).within(F(mpmath.nstr(ref, 45)), F(1, 10**40))
    assert abs(float(translation_length(T)) - 0.2389) < 1e-4
    Xm = [[0, -A / 10], [F(-1, 10), 0]]
    assert cayley(Xm, Q) == T.inverse()


def test_cayley_singular():
    Q = QuadraticForm.diagonal(QQ, [1, -1])
    with pytest.raises(Singular):
        cayley([[0, 1], [1, 0]], Q)


def random_skew(rng, Q, scale=6):
    X = linalg.zeros(Q.field, Q.dim)
    for B in skew_basis(Q):
        c = Q.field([F(rng.randint(-4, 4), rng.randint(scale, 3 * scale)) for _ in range(Q.field.degree)])
        X = linalg.add(X, linalg.scale(B, c))
    return X


def random_isometry(rng, Q):
    while True:
        try:
            return cayley(random_skew(rng, Q), Q)
        except (Singular, NotOrthochronous):
            continue


def test_cayley_round_trip():
    rng = random.Random(4)
    Q = QuadraticForm.diagonal(K2, [1, 1, 1, -A])
    for _ in range(10):
        X = random_skew(rng, Q)
        try:
            g = cayley(X, Q)
        except (Singular, NotOrthochronous):
            continue
        assert linalg.equal(inverse_cayley(g), X)
        assert cayley(inverse_cayley(g), Q) == g


def test_inverse_cayley_chart_miss():
    M = linalg.diag(QQ, [-1, -1, 1, 1])
    with pytest.raises(CayleyChartMiss):
        inverse_cayley(IsometryK(M, J(3)))


def random_loxodromic(rng, Q):
    while True:
        g = random_isometry(rng, Q)
        if classify(g) == IsometryKind.LOXODROMIC:
            return g


def test_eigenvalue_structure():
    rng = random.Random(12)
    Q = J(3)
    for _ in range(10):
        g = random_loxodromic(rng, Q)
        roots = mp_roots([c.to_rational() for c in g.char_poly])
        big = [z for z in roots if abs(z) > 1 + 1e-20]
        small = [z for z in roots if abs(z) < 1 - 1e-20]
        assert len(big) == 1 and len(small) == 1
        assert abs(big[0].imag) < 1e-30 and big[0].real > 1
        lo, hi = translation_length(g).enclose_fractions(F(1, 10**40))
        with mpmath.workdps(50):
            lam = mpmath.exp(mpmath.mpf(lo.numerator) / lo.denominator)
            assert abs(lam - big[0].real) < 1e-25


def test_power_and_conjugation_invariance():
    rng = random.Random(21)
    Q = QuadraticForm.diagonal(K2, [1, 1, 1, -A])
    for _ in range(5):
        g = random_loxodromic(rng, Q)
        ell = translation_length(g)
        for n in range(2, 4):
            assert translation_length(g ** n).within(n * ell, TIGHT)
        h = random_isometry(rng, Q)
        c1, c2 = complex_length(g), complex_length(g.conjugate(h))
        assert c1.length.within(c2.length, TIGHT)
        assert holonomy_distance(c1.holonomy, c2.holonomy).sign() == 0


def real_target(rng, d, dps=60):
    """Random element of SO'(q0, R) as exp of a random real q0-skew matrix (mpmath)."""
    n = d + 1
    with mpmath.workdps(dps):
        Xr = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(i + 1, n):
                w = mpmath.mpf(rng.uniform(-1, 1))
                Xr[i, j] = w
                Xr[j, i] = -w if j < d else w
        G = mpmath.expm(Xr)
        return [[G[i, j] for j in range(n)] for i in range(n)]


def test_approximate_random_targets():
    rng = random.Random(30)
    Q = J(3)
    eps = F(1, 10**6)
    for _ in range(5):
        target = real_target(rng, 3)
        g = approximate(target, eps, Q)
        assert linalg.equal(linalg.congruent(Q.gram, g.matrix), Q.gram)
        for row, trow in zip(g.matrix, target):
            for x, t in zip(row, trow):
                assert abs(mpmath.mpf(x.to_rational().numerator) / x.to_rational().denominator - t) < 1e-6


def test_approximate_finer():
    rng = random.Random(31)
    Q = J(3)
    target = real_target(rng, 3)
    g6 = approximate(target, F(1, 10**6), Q)
    g12 = approximate(target, F(1, 10**12), Q)
    for row, trow in zip(g12.matrix, target):
        for x, t in zip(row, trow):
            assert abs(mpmath.mpf(x.to_rational().numerator) / x.to_rational().denominator - t) < 1e-12
    den6 = max(x.to_rational().denominator for row in g6.matrix for x in row)
    den12 = max(x.to_rational().denominator for row in g12.matrix for x in row)
    assert den12 > den6


def test_approximate_exact_target():
    Q = QuadraticForm.diagonal(K2, [1, 1, 1, -A])
    g = build_infinite_holonomy_example(3, F(1, 10))
    approx = approximate(g.real_matrix(), F(1, 10**8), Q)
    for row, row2 in zip(approx.matrix, g.matrix):
        for x, y in zip(row, row2):
            assert (x.embed() - y.embed()).within(0, F(1, 10**8))


def test_approximate_half_turn_target():
    # eigenvalue -1: the Cayley chart misses, the fixed shift recovers
    Q = J(3)
    target = [[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    g = approximate(target, F(1, 10**6), Q)
    for row, trow in zip(g.matrix, target):
        for x, t in zip(row, trow):
            assert abs(x.to_rational() - t) < F(1, 10**6)


def test_approximate_rejects_non_isometry():
    with pytest.raises(NotIsometry):
        approximate([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], F(1, 100), J(3))
